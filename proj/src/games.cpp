#include "ethdyn/games.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "ethdyn/errors.hpp"

namespace ethdyn::games {

namespace {

// true when `a` is strictly better than `b` for a player with orientation `o`
bool better(Orientation o, double a, double b) {
    return o == Orientation::Maximize ? a > b : a < b;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

int find_label(const OrdinalGame& g, int player, const char* name) {
    for (int s = 0; s < 2; ++s) {
        if (lower(g.labels[player][s]) == name) {
            return s;
        }
    }
    return -1;
}

// Payoff to `player` when they play `own` and the opponent plays `other`.
double own_payoff(const OrdinalGame& g, int player, int own, int other) {
    return player == 0 ? g.payoff(0, own, other) : g.payoff(1, other, own);
}

} // namespace

double OrdinalGame::payoff(int player, int row, int col) const {
    const auto& cell = payoffs[row][col];
    return player == 0 ? cell.first : cell.second;
}

void validate(const OrdinalGame& g) {
    for (const auto& row : g.payoffs) {
        for (const auto& cell : row) {
            if (!std::isfinite(cell.first) || !std::isfinite(cell.second)) {
                throw DomainError("game: payoffs must be finite");
            }
        }
    }
}

std::array<std::optional<int>, 2> dominant_strategies(const OrdinalGame& g) {
    validate(g);
    std::array<std::optional<int>, 2> result;
    for (int player = 0; player < 2; ++player) {
        const Orientation o = g.orientation[player];
        for (int s = 0; s < 2; ++s) {
            const int alt = 1 - s;
            bool never_worse = true;
            bool sometimes_better = false;
            for (int other = 0; other < 2; ++other) {
                const double mine = own_payoff(g, player, s, other);
                const double theirs = own_payoff(g, player, alt, other);
                if (better(o, theirs, mine)) {
                    never_worse = false;
                }
                if (better(o, mine, theirs)) {
                    sometimes_better = true;
                }
            }
            if (never_worse && sometimes_better) {
                result[player] = s;
            }
        }
    }
    return result;
}

std::vector<Profile> pure_nash_equilibria(const OrdinalGame& g) {
    validate(g);
    std::vector<Profile> out;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            const bool row_stays = !better(g.orientation[0], g.payoff(0, 1 - r, c), g.payoff(0, r, c));
            const bool col_stays = !better(g.orientation[1], g.payoff(1, r, 1 - c), g.payoff(1, r, c));
            if (row_stays && col_stays) {
                out.emplace_back(r, c);
            }
        }
    }
    return out;
}

OrdinalGame feb_transform(const OrdinalGame& g, double bonus) {
    validate(g);
    if (!std::isfinite(bonus) || bonus < 0.0) {
        throw DomainError("feb_transform: bonus must be finite and >= 0");
    }
    OrdinalGame out = g;
    for (int player = 0; player < 2; ++player) {
        const int ret = find_label(g, player, "return");
        const int keep = find_label(g, player, "keep");
        if (ret < 0 || keep < 0) {
            throw DomainError("feb_transform: player " + std::to_string(player) +
                              " needs strategies labelled Return and Keep");
        }
        double keep_value = -std::numeric_limits<double>::infinity();
        for (int other = 0; other < 2; ++other) {
            keep_value = std::max(keep_value, own_payoff(g, player, keep, other));
        }
        for (int other = 0; other < 2; ++other) {
            auto& cell = player == 0 ? out.payoffs[ret][other] : out.payoffs[other][ret];
            (player == 0 ? cell.first : cell.second) = keep_value + bonus;
        }
    }
    return out;
}

OrdinalGame dual(const OrdinalGame& g) {
    OrdinalGame out = g;
    for (auto& row : out.payoffs) {
        for (auto& cell : row) {
            cell.first = -cell.first;
            cell.second = -cell.second;
        }
    }
    for (auto& o : out.orientation) {
        o = o == Orientation::Maximize ? Orientation::Minimize : Orientation::Maximize;
    }
    return out;
}

OrdinalGame prisoners_dilemma() {
    OrdinalGame g;
    g.payoffs = {{{{{1, 1}, {10, 0}}}, {{{0, 10}, {5, 5}}}}};
    g.orientation = {Orientation::Minimize, Orientation::Minimize};
    g.labels = {{{"Cooperate", "Defect"}, {"Cooperate", "Defect"}}};
    return g;
}

OrdinalGame keep_return() {
    OrdinalGame g;
    g.payoffs = {{{{{50, 50}, {50, 100}}}, {{{100, 50}, {100, 100}}}}};
    g.orientation = {Orientation::Maximize, Orientation::Maximize};
    g.labels = {{{"Return", "Keep"}, {"Return", "Keep"}}};
    return g;
}

BehaviorMatrix::BehaviorMatrix(double phi11, double phi21) : phi11_(phi11), phi21_(phi21) {
    if (!(phi11 >= 0.0 && phi11 <= 1.0) || !(phi21 >= 0.0 && phi21 <= 1.0)) {
        throw DomainError("behavior matrix entries must lie in [0, 1]");
    }
}

linalg::SquareMatrix BehaviorMatrix::matrix() const {
    return linalg::SquareMatrix::from_rows({{phi11(), phi12()}, {phi21(), phi22()}});
}

std::array<EigenPair, 2> phi_eigen(const BehaviorMatrix& m) {
    auto pairs = linalg::eigenpairs(m.matrix());
    return {std::move(pairs[0]), std::move(pairs[1])};
}

} // namespace ethdyn::games
