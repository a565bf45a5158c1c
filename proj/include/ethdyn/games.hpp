#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ethdyn/linalg.hpp"

namespace ethdyn::games {

using linalg::EigenPair;

enum class Orientation { Minimize, Maximize };

/// Strategy profile: (row player's strategy, column player's strategy).
using Profile = std::pair<int, int>;

/// Two-player, two-strategy game. payoffs[r][c] holds (row payoff, column
/// payoff) when the row player plays r and the column player plays c.
/// Player 0 is the row player.
struct OrdinalGame {
    std::array<std::array<std::pair<double, double>, 2>, 2> payoffs{};
    std::array<Orientation, 2> orientation{Orientation::Maximize, Orientation::Maximize};
    std::array<std::array<std::string, 2>, 2> labels{};

    /// Payoff to `player` under profile (row, col).
    double payoff(int player, int row, int col) const;
};

/// Throws DomainError on non-finite payoffs.
void validate(const OrdinalGame& g);

/// Weak-everywhere, strict-somewhere dominance per player.
std::array<std::optional<int>, 2> dominant_strategies(const OrdinalGame& g);

/// Profiles where no unilateral deviation strictly improves, row-major order.
std::vector<Profile> pure_nash_equilibria(const OrdinalGame& g);

/// Reward the Return strategy: every cell where a player plays "Return" pays
/// that player (keep value + bonus), keep value being the best payoff the
/// player can get by playing "Keep". Strategy labels select which index is
/// which (case-insensitive); DomainError if a player lacks either label or
/// bonus is negative.
OrdinalGame feb_transform(const OrdinalGame& g, double bonus);

/// Negate every payoff and flip both orientations. Preserves every verdict.
OrdinalGame dual(const OrdinalGame& g);

OrdinalGame prisoners_dilemma();
OrdinalGame keep_return();

/// Row-stochastic propensity matrix [[phi11, 1-phi11], [phi21, 1-phi21]].
class BehaviorMatrix {
public:
    /// Throws DomainError unless both entries lie in [0, 1].
    BehaviorMatrix(double phi11, double phi21);

    double phi11() const noexcept { return phi11_; }
    double phi12() const noexcept { return 1.0 - phi11_; }
    double phi21() const noexcept { return phi21_; }
    double phi22() const noexcept { return 1.0 - phi21_; }

    linalg::SquareMatrix matrix() const;

private:
    double phi11_;
    double phi21_;
};

/// Numeric eigenpairs of the full Phi matrix, descending real part.
std::array<EigenPair, 2> phi_eigen(const BehaviorMatrix& m);

} // namespace ethdyn::games
