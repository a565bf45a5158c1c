#include "ethdyn/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "ethdyn/errors.hpp"

namespace ethdyn::polytope {

namespace {

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

double max_abs(const Vec3& a) {
    return std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2])});
}

double snap(double v) {
    const double r = std::round(v);
    return std::abs(v - r) <= 1e-12 * std::max(1.0, std::abs(v)) ? r + 0.0 : v;
}

bool lex_less(const Vec3& a, const Vec3& b) { return std::tie(a[0], a[1], a[2]) < std::tie(b[0], b[1], b[2]); }

// Scale so max |normal component| == 1 and tidy rounding noise.
Halfspace canonical(const Vec3& normal, double offset) {
    const double m = max_abs(normal);
    Halfspace h;
    for (int i = 0; i < 3; ++i) {
        h.normal[i] = snap(normal[i] / m);
    }
    h.offset = snap(offset / m);
    return h;
}

bool same_halfspace(const Halfspace& a, const Halfspace& b) {
    return same_point(a.normal, b.normal) && std::abs(a.offset - b.offset) <= kTol;
}

void push_unique(std::vector<Halfspace>& list, const Halfspace& h) {
    for (const auto& existing : list) {
        if (same_halfspace(existing, h)) {
            return;
        }
    }
    list.push_back(h);
}

void push_unique(std::vector<Vec3>& list, const Vec3& p) {
    for (const auto& existing : list) {
        if (same_point(existing, p)) {
            return;
        }
    }
    list.push_back(p);
}

// Orthonormal basis of span(vectors), Gram-Schmidt with tolerance.
std::vector<Vec3> span_basis(const std::vector<Vec3>& vectors, double tol) {
    std::vector<Vec3> basis;
    for (Vec3 v : vectors) {
        for (const auto& b : basis) {
            v = sub(v, scale(b, dot(v, b)));
        }
        const double n = norm(v);
        if (n > tol) {
            basis.push_back(scale(v, 1.0 / n));
            if (basis.size() == 3) {
                break;
            }
        }
    }
    return basis;
}

std::size_t normal_rank(const std::vector<const Halfspace*>& hs) {
    std::vector<Vec3> normals;
    normals.reserve(hs.size());
    for (const auto* h : hs) {
        normals.push_back(h->normal);
    }
    return span_basis(normals, 1e-9).size();
}

bool is_tight(const Halfspace& h, const Vec3& p) { return std::abs(dot(h.normal, p) - h.offset) <= kTol; }

// Add the halfspace through `at` with the given normal oriented so every
// point lies on its inner side; skip if the points straddle the plane.
void add_supporting(std::vector<Halfspace>& out, const Vec3& normal, const Vec3& at,
                    const std::vector<Vec3>& points) {
    if (max_abs(normal) <= 1e-12) {
        return;
    }
    Halfspace h = canonical(normal, dot(normal, at));
    bool all_below = true;
    bool all_above = true;
    for (const auto& q : points) {
        const double s = dot(h.normal, q) - h.offset;
        all_below = all_below && s <= kTol;
        all_above = all_above && s >= -kTol;
    }
    if (all_below) {
        push_unique(out, h);
    }
    if (all_above) {
        push_unique(out, Halfspace{scale(h.normal, -1.0), -h.offset});
    }
}

void sort_halfspaces(std::vector<Halfspace>& hs) {
    for (auto& h : hs) {
        for (auto& c : h.normal) {
            c += 0.0; // fold -0.0
        }
        h.offset += 0.0;
    }
    std::sort(hs.begin(), hs.end(), [](const Halfspace& a, const Halfspace& b) {
        return std::tie(a.normal[0], a.normal[1], a.normal[2], a.offset) <
               std::tie(b.normal[0], b.normal[1], b.normal[2], b.offset);
    });
}

// Solve the 3x3 system rows . x = rhs by Cramer's rule.
std::optional<Vec3> intersect(const Halfspace& a, const Halfspace& b, const Halfspace& c) {
    const double det = dot(a.normal, cross(b.normal, c.normal));
    if (std::abs(det) <= 1e-12) {
        return std::nullopt;
    }
    const Vec3 x = scale(cross(b.normal, c.normal), a.offset);
    const Vec3 y = scale(cross(c.normal, a.normal), b.offset);
    const Vec3 z = scale(cross(a.normal, b.normal), c.offset);
    return scale(Vec3{x[0] + y[0] + z[0], x[1] + y[1] + z[1], x[2] + y[2] + z[2]}, 1.0 / det);
}

// Solve a small dense system in place; false when singular.
bool solve(std::vector<std::vector<double>>& a, std::vector<double>& b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) {
                piv = r;
            }
        }
        if (std::abs(a[piv][col]) <= 1e-12) {
            return false;
        }
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) {
                a[r][k] -= f * a[col][k];
            }
            b[r] -= f * b[col];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t k = i + 1; k < n; ++k) {
            acc -= a[i][k] * b[k];
        }
        b[i] = acc / a[i][i];
    }
    return true;
}

// Barycentric weights of x over the listed vertices, if x lies in their hull.
std::optional<std::vector<double>> simplex_weights(const std::vector<Vec3>& verts,
                                                   const std::vector<std::size_t>& idx,
                                                   const Vec3& x) {
    const std::size_t k = idx.size();
    std::vector<double> w(k, 0.0);
    if (k == 1) {
        w[0] = 1.0;
    } else {
        const Vec3& base = verts[idx[0]];
        std::vector<Vec3> d;
        for (std::size_t i = 1; i < k; ++i) {
            d.push_back(sub(verts[idx[i]], base));
        }
        const Vec3 r = sub(x, base);
        std::vector<std::vector<double>> gram(k - 1, std::vector<double>(k - 1));
        std::vector<double> rhs(k - 1);
        for (std::size_t i = 0; i + 1 < k; ++i) {
            for (std::size_t j = 0; j + 1 < k; ++j) {
                gram[i][j] = dot(d[i], d[j]);
            }
            rhs[i] = dot(d[i], r);
        }
        if (!solve(gram, rhs)) {
            return std::nullopt;
        }
        double rest = 1.0;
        for (std::size_t i = 1; i < k; ++i) {
            w[i] = rhs[i - 1];
            rest -= w[i];
        }
        w[0] = rest;
    }
    for (double v : w) {
        if (v < -kTol) {
            return std::nullopt;
        }
    }
    double total = 0.0;
    for (double& v : w) {
        v = std::max(v, 0.0);
        total += v;
    }
    Vec3 rebuilt{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < k; ++i) {
        w[i] /= total;
        for (int c = 0; c < 3; ++c) {
            rebuilt[c] += w[i] * verts[idx[i]][c];
        }
    }
    if (norm(sub(rebuilt, x)) > 1e-7) {
        return std::nullopt;
    }
    return w;
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t k = idx.size();
    for (std::size_t i = k; i-- > 0;) {
        if (idx[i] < n - k + i) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    return false;
}

Edge ordered(const Vec3& a, const Vec3& b) { return lex_less(b, a) ? Edge{b, a} : Edge{a, b}; }

} // namespace

bool same_point(const Vec3& a, const Vec3& b, double tol) {
    return std::abs(a[0] - b[0]) <= tol && std::abs(a[1] - b[1]) <= tol && std::abs(a[2] - b[2]) <= tol;
}

bool same_edge(const Edge& a, const Edge& b, double tol) {
    return (same_point(a.first, b.first, tol) && same_point(a.second, b.second, tol)) ||
           (same_point(a.first, b.second, tol) && same_point(a.second, b.first, tol));
}

std::optional<std::size_t> TruthTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < variables.size(); ++i) {
        if (variables[i] == name) {
            return i;
        }
    }
    for (std::size_t i = 0; i < output_names.size(); ++i) {
        if (output_names[i] == name) {
            return variables.size() + i;
        }
    }
    return std::nullopt;
}

bool TruthTable::value(std::size_t row, std::size_t col) const {
    return col < variables.size() ? rows[row][col] : outputs[row][col - variables.size()];
}

TruthTable truth_table(const std::vector<std::string>& variables,
                       const std::vector<OutputColumn>& outputs) {
    if (variables.empty() || variables.size() > 16) {
        throw DomainError("truth_table: need between 1 and 16 variables");
    }
    for (std::size_t i = 0; i < variables.size(); ++i) {
        for (std::size_t j = i + 1; j < variables.size(); ++j) {
            if (variables[i] == variables[j]) {
                throw DomainError("truth_table: duplicate variable '" + variables[i] + "'");
            }
        }
    }

    TruthTable t;
    t.variables = variables;
    std::vector<std::vector<std::size_t>> operand_index;
    for (const auto& out : outputs) {
        if (out.operands.empty()) {
            throw DomainError("truth_table: output '" + out.name + "' has no operands");
        }
        std::vector<std::size_t> idx;
        for (const auto& op : out.operands) {
            auto it = std::find(variables.begin(), variables.end(), op);
            if (it == variables.end()) {
                throw DomainError("truth_table: output '" + out.name + "' references unknown variable '" +
                                  op + "'");
            }
            idx.push_back(static_cast<std::size_t>(it - variables.begin()));
        }
        operand_index.push_back(std::move(idx));
        t.output_names.push_back(out.name);
    }

    const std::size_t k = variables.size();
    const std::size_t n_rows = std::size_t{1} << k;
    for (std::size_t r = 0; r < n_rows; ++r) {
        std::vector<bool> row(k);
        for (std::size_t v = 0; v < k; ++v) {
            row[v] = ((r >> (k - 1 - v)) & 1U) != 0;
        }
        std::vector<bool> outs;
        for (std::size_t o = 0; o < outputs.size(); ++o) {
            const bool is_and = outputs[o].connective == Connective::And;
            bool acc = is_and;
            for (std::size_t v : operand_index[o]) {
                acc = is_and ? (acc && row[v]) : (acc || row[v]);
            }
            outs.push_back(acc);
        }
        t.rows.push_back(std::move(row));
        t.outputs.push_back(std::move(outs));
    }
    return t;
}

TruthTable restrict_extremal(const TruthTable& t,
                             const std::vector<std::pair<std::string, std::string>>& complement_pairs) {
    std::vector<std::pair<std::size_t, std::size_t>> idx;
    for (const auto& [a, b] : complement_pairs) {
        auto ia = std::find(t.variables.begin(), t.variables.end(), a);
        auto ib = std::find(t.variables.begin(), t.variables.end(), b);
        if (ia == t.variables.end() || ib == t.variables.end() || a == b) {
            throw DomainError("restrict_extremal: pair (" + a + ", " + b +
                              ") must name two distinct variables");
        }
        idx.emplace_back(ia - t.variables.begin(), ib - t.variables.begin());
    }
    TruthTable out;
    out.variables = t.variables;
    out.output_names = t.output_names;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        bool keep = true;
        for (const auto& [a, b] : idx) {
            keep = keep && (static_cast<int>(t.rows[r][a]) + static_cast<int>(t.rows[r][b]) == 1);
        }
        if (keep) {
            out.rows.push_back(t.rows[r]);
            out.outputs.push_back(t.outputs[r]);
        }
    }
    return out;
}

std::vector<Vec3> project_rows(const TruthTable& t, const std::array<std::string, 3>& axes) {
    std::array<std::size_t, 3> cols{};
    for (int a = 0; a < 3; ++a) {
        auto c = t.column(axes[a]);
        if (!c) {
            throw DomainError("project_rows: unknown column '" + axes[a] + "'");
        }
        cols[a] = *c;
    }
    std::vector<Vec3> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        out.push_back({t.value(r, cols[0]) ? 1.0 : 0.0, t.value(r, cols[1]) ? 1.0 : 0.0,
                       t.value(r, cols[2]) ? 1.0 : 0.0});
    }
    return out;
}

Polytope polytope_from_vertices(const std::vector<Vec3>& input) {
    if (input.empty()) {
        throw DomainError("polytope_from_vertices: empty vertex list");
    }
    std::vector<Vec3> pts;
    for (const auto& p : input) {
        if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || !std::isfinite(p[2])) {
            throw DomainError("polytope_from_vertices: non-finite coordinate");
        }
        push_unique(pts, p);
    }

    std::vector<Vec3> diffs;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        diffs.push_back(sub(pts[i], pts[0]));
    }
    const auto basis = span_basis(diffs, kTol);
    const int dim = static_cast<int>(basis.size());

    std::vector<Halfspace> hs;
    const std::size_t n = pts.size();
    if (dim == 3) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                for (std::size_t k = j + 1; k < n; ++k) {
                    add_supporting(hs, cross(sub(pts[j], pts[i]), sub(pts[k], pts[i])), pts[i], pts);
                }
            }
        }
    } else {
        // containing planes: the orthogonal complement of the affine hull
        std::vector<Vec3> axes = basis;
        axes.push_back({1.0, 0.0, 0.0});
        axes.push_back({0.0, 1.0, 0.0});
        axes.push_back({0.0, 0.0, 1.0});
        const auto full = span_basis(axes, 1e-6);
        for (std::size_t c = basis.size(); c < full.size(); ++c) {
            add_supporting(hs, full[c], pts[0], pts);
        }
        if (dim == 2) {
            const Vec3 plane = cross(basis[0], basis[1]);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    add_supporting(hs, cross(plane, sub(pts[j], pts[i])), pts[i], pts);
                }
            }
        } else if (dim == 1) {
            for (const auto& p : pts) {
                add_supporting(hs, basis[0], p, pts);
            }
        }
    }
    sort_halfspaces(hs);

    Polytope poly;
    poly.dimension = dim;
    poly.halfspaces = hs;
    for (const auto& p : pts) {
        std::vector<const Halfspace*> tight;
        for (const auto& h : hs) {
            if (is_tight(h, p)) {
                tight.push_back(&h);
            }
        }
        if (normal_rank(tight) == 3) {
            poly.vertices.push_back(p);
        }
    }
    for (auto& v : poly.vertices) {
        for (auto& c : v) {
            c += 0.0;
        }
    }
    std::sort(poly.vertices.begin(), poly.vertices.end(), lex_less);
    return poly;
}

Polytope polytope_from_halfspaces(const std::vector<Halfspace>& input) {
    if (input.empty()) {
        throw GeometryError("polytope_from_halfspaces: no halfspaces (unbounded)");
    }
    std::vector<Halfspace> planes;
    double reach = 1.0;
    for (const auto& h : input) {
        if (!std::isfinite(h.offset) || !std::isfinite(h.normal[0]) || !std::isfinite(h.normal[1]) ||
            !std::isfinite(h.normal[2])) {
            throw DomainError("polytope_from_halfspaces: non-finite halfspace");
        }
        if (max_abs(h.normal) == 0.0) {
            if (h.offset < 0.0) {
                throw GeometryError("polytope_from_halfspaces: empty intersection (0 <= negative)");
            }
            continue;
        }
        const Halfspace c = canonical(h.normal, h.offset);
        push_unique(planes, c);
        reach = std::max(reach, std::abs(c.offset));
    }
    // a bounding box far outside any vertex exposes unbounded directions
    const double box = 1e6 * reach;
    const std::size_t n_real = planes.size();
    for (int a = 0; a < 3; ++a) {
        Vec3 e{0.0, 0.0, 0.0};
        e[a] = 1.0;
        planes.push_back({e, box});
        planes.push_back({scale(e, -1.0), box});
    }

    std::vector<Vec3> verts;
    bool touches_box = false;
    const std::size_t n = planes.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                auto x = intersect(planes[i], planes[j], planes[k]);
                if (!x) {
                    continue;
                }
                bool feasible = true;
                for (std::size_t h = 0; h < n && feasible; ++h) {
                    const double slack = dot(planes[h].normal, *x) - planes[h].offset;
                    feasible = slack <= kTol * std::max(1.0, std::abs(planes[h].offset));
                }
                if (!feasible) {
                    continue;
                }
                if (k >= n_real) {
                    touches_box = true;
                    continue;
                }
                Vec3 p = *x;
                for (auto& c : p) {
                    c = snap(c);
                }
                push_unique(verts, p);
            }
        }
    }
    if (touches_box) {
        throw GeometryError("polytope_from_halfspaces: intersection is unbounded");
    }
    if (verts.empty()) {
        throw GeometryError("polytope_from_halfspaces: intersection is empty");
    }
    return polytope_from_vertices(verts);
}

std::optional<std::vector<double>> convex_coefficients(const std::vector<Vec3>& vertices, const Vec3& x) {
    const std::size_t n = vertices.size();
    for (std::size_t k = 1; k <= std::min<std::size_t>(4, n); ++k) {
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < k; ++i) {
            idx[i] = i;
        }
        do {
            if (auto w = simplex_weights(vertices, idx, x)) {
                std::vector<double> full(n, 0.0);
                for (std::size_t i = 0; i < k; ++i) {
                    full[idx[i]] = (*w)[i];
                }
                return full;
            }
        } while (next_combination(idx, n));
    }
    return std::nullopt;
}

Membership contains(const Polytope& p, const Vec3& x) {
    Membership m;
    for (const auto& h : p.halfspaces) {
        if (dot(h.normal, x) - h.offset > kTol) {
            return m;
        }
    }
    m.inside = true;
    m.coefficients = convex_coefficients(p.vertices, x);
    return m;
}

std::vector<Edge> edges(const Polytope& p) {
    std::vector<Edge> out;
    const std::size_t n = p.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            std::vector<const Halfspace*> common;
            for (const auto& h : p.halfspaces) {
                if (is_tight(h, p.vertices[i]) && is_tight(h, p.vertices[j])) {
                    common.push_back(&h);
                }
            }
            if (normal_rank(common) >= 2) {
                out.push_back(ordered(p.vertices[i], p.vertices[j]));
            }
        }
    }
    return out;
}

Combination combine(const Polytope& a, const Polytope& b) {
    Combination c;
    for (const auto& v : a.vertices) {
        for (const auto& w : b.vertices) {
            if (same_point(v, w)) {
                c.shared_vertices.push_back(v);
                break;
            }
        }
    }
    const auto ea = edges(a);
    const auto eb = edges(b);
    auto contains_edge = [](const std::vector<Edge>& list, const Edge& e) {
        return std::any_of(list.begin(), list.end(), [&](const Edge& f) { return same_edge(e, f); });
    };
    for (const auto& e : ea) {
        (contains_edge(eb, e) ? c.shared_edges : c.only_first).push_back(e);
    }
    for (const auto& e : eb) {
        if (!contains_edge(ea, e)) {
            c.only_second.push_back(e);
        }
    }
    return c;
}

} // namespace ethdyn::polytope
