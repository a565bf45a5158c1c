#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ethdyn::polytope {

using Vec3 = std::array<double, 3>;

/// Tolerance for every geometric comparison in this module.
inline constexpr double kTol = 1e-9;

enum class Connective { And, Or };

struct OutputColumn {
    std::string name;
    Connective connective = Connective::And;
    std::vector<std::string> operands;
};

/// Boolean table over named variables. rows[i][k] is variable k in row i;
/// outputs[i][j] is output column j in row i.
struct TruthTable {
    std::vector<std::string> variables;
    std::vector<std::string> output_names;
    std::vector<std::vector<bool>> rows;
    std::vector<std::vector<bool>> outputs;

    /// Index of a variable or output column by name, searching variables first.
    std::optional<std::size_t> column(const std::string& name) const;
    bool value(std::size_t row, std::size_t column) const;
    std::size_t column_count() const { return variables.size() + output_names.size(); }
};

/// All 2^k assignments in ascending binary order (first variable is the most
/// significant bit) with every output column evaluated.
TruthTable truth_table(const std::vector<std::string>& variables,
                       const std::vector<OutputColumn>& outputs);

/// Keep only rows where each named pair sums to exactly one.
TruthTable restrict_extremal(const TruthTable& t,
                             const std::vector<std::pair<std::string, std::string>>& complement_pairs);

/// One 3-vector per row, taking the named columns (variables or outputs).
std::vector<Vec3> project_rows(const TruthTable& t, const std::array<std::string, 3>& axes);

/// a . x <= b
struct Halfspace {
    Vec3 normal{};
    double offset = 0.0;
};

struct Polytope {
    std::vector<Vec3> vertices;
    std::vector<Halfspace> halfspaces;
    /// Affine dimension of the vertex set (0..3).
    int dimension = 0;
};

/// Convex hull by brute-force facet enumeration over vertex triples.
/// Facet normals point outward and are scaled to max |component| = 1; the
/// list is sorted lexicographically. Lower-dimensional inputs also carry both
/// halfspaces of every containing plane.
Polytope polytope_from_vertices(const std::vector<Vec3>& points);

/// Vertex enumeration over all triples of boundary planes. GeometryError if
/// the intersection is empty or unbounded.
Polytope polytope_from_halfspaces(const std::vector<Halfspace>& halfspaces);

struct Membership {
    bool inside = false;
    /// One weight per polytope vertex, present when inside.
    std::optional<std::vector<double>> coefficients;
};

Membership contains(const Polytope& p, const Vec3& x);

/// Nonnegative weights summing to one with sum w_i v_i == x (to 1e-7), found
/// by searching simplices of up to four vertices. Uses only the vertices.
std::optional<std::vector<double>> convex_coefficients(const std::vector<Vec3>& vertices,
                                                       const Vec3& x);

using Edge = std::pair<Vec3, Vec3>;

/// Vertex pairs whose common tight halfspaces have normals of rank >= 2.
std::vector<Edge> edges(const Polytope& p);

struct Combination {
    std::vector<Vec3> shared_vertices;
    std::vector<Edge> shared_edges;
    std::vector<Edge> only_first;
    std::vector<Edge> only_second;
};

Combination combine(const Polytope& a, const Polytope& b);

bool same_point(const Vec3& a, const Vec3& b, double tol = kTol);
bool same_edge(const Edge& a, const Edge& b, double tol = kTol);

} // namespace ethdyn::polytope
