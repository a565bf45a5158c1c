#include <doctest.h>

#include <cmath>

#include "ethdyn/errors.hpp"
#include "ethdyn/games.hpp"
#include "support.hpp"

using namespace ethdyn;
using games::OrdinalGame;
using games::Orientation;
using games::Profile;

namespace {

// Utility where larger is always better.
double utility(const OrdinalGame& g, int player, int r, int c) {
    const double v = g.payoff(player, r, c);
    return g.orientation[player] == Orientation::Maximize ? v : -v;
}

std::vector<Profile> brute_nash(const OrdinalGame& g) {
    std::vector<Profile> out;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            const bool row_stays = utility(g, 0, r, c) >= utility(g, 0, 1 - r, c);
            const bool col_stays = utility(g, 1, r, c) >= utility(g, 1, r, 1 - c);
            if (row_stays && col_stays) {
                out.emplace_back(r, c);
            }
        }
    }
    return out;
}

std::optional<int> brute_dominant(const OrdinalGame& g, int player) {
    for (int s = 0; s < 2; ++s) {
        bool weak = true;
        bool strict = false;
        for (int other = 0; other < 2; ++other) {
            const double mine = player == 0 ? utility(g, 0, s, other) : utility(g, 1, other, s);
            const double alt = player == 0 ? utility(g, 0, 1 - s, other) : utility(g, 1, other, 1 - s);
            weak = weak && mine >= alt;
            strict = strict || mine > alt;
        }
        if (weak && strict) {
            return s;
        }
    }
    return std::nullopt;
}

OrdinalGame random_game() {
    OrdinalGame g;
    for (auto& row : g.payoffs) {
        for (auto& cell : row) {
            // small integer payoffs so ties happen
            cell = {std::floor(support::uniform(0, 4)), std::floor(support::uniform(0, 4))};
        }
    }
    g.orientation = {support::uniform(0, 1) < 0.5 ? Orientation::Minimize : Orientation::Maximize,
                     support::uniform(0, 1) < 0.5 ? Orientation::Minimize : Orientation::Maximize};
    return g;
}

} // namespace

TEST_CASE("prisoner's dilemma payoffs and verdicts") {
    const auto pd = games::prisoners_dilemma();
    CHECK(pd.payoffs[0][0] == std::pair(1.0, 1.0));
    CHECK(pd.payoffs[0][1] == std::pair(10.0, 0.0));
    CHECK(pd.payoffs[1][0] == std::pair(0.0, 10.0));
    CHECK(pd.payoffs[1][1] == std::pair(5.0, 5.0));
    CHECK(pd.labels[0][1] == "Defect");
    const auto dom = games::dominant_strategies(pd);
    CHECK(dom[0] == 1);
    CHECK(dom[1] == 1);
    CHECK(games::pure_nash_equilibria(pd) == std::vector<Profile>{{1, 1}});
}

TEST_CASE("keep/return and the forced ethical bonus") {
    const auto kr = games::keep_return();
    CHECK(kr.labels[0][0] == "Return");
    CHECK(kr.labels[0][1] == "Keep");
    const auto dom = games::dominant_strategies(kr);
    CHECK(dom[0] == 1);
    CHECK(dom[1] == 1);

    const auto feb = games::feb_transform(kr, 50.0);
    CHECK(feb.payoffs[0][0] == std::pair(150.0, 150.0));
    CHECK(feb.payoffs[0][1] == std::pair(150.0, 100.0));
    CHECK(feb.payoffs[1][0] == std::pair(100.0, 150.0));
    CHECK(feb.payoffs[1][1] == std::pair(100.0, 100.0));
    CHECK(games::pure_nash_equilibria(feb) == std::vector<Profile>{{0, 0}});
    const auto fdom = games::dominant_strategies(feb);
    CHECK(fdom[0] == 0);
    CHECK(fdom[1] == 0);
}

TEST_CASE("zero bonus leaves Return no better than Keep") {
    const auto feb = games::feb_transform(games::keep_return(), 0.0);
    CHECK(games::pure_nash_equilibria(feb).size() == 4);
    CHECK(!games::dominant_strategies(feb)[0]);
}

TEST_CASE("FEB needs Return and Keep labels and a non-negative bonus") {
    CHECK_THROWS_AS(games::feb_transform(games::prisoners_dilemma(), 10.0), DomainError);
    CHECK_THROWS_AS(games::feb_transform(games::keep_return(), -1.0), DomainError);
}

TEST_CASE("all-equal payoffs: no dominant strategy, every profile is Nash") {
    OrdinalGame g;
    for (auto& row : g.payoffs) {
        for (auto& cell : row) {
            cell = {3.0, 3.0};
        }
    }
    CHECK(!games::dominant_strategies(g)[0]);
    CHECK(!games::dominant_strategies(g)[1]);
    CHECK(games::pure_nash_equilibria(g).size() == 4);
}

TEST_CASE("property: verdicts agree with the brute-force oracle and survive dualization") {
    for (int trial = 0; trial < 2000; ++trial) {
        const auto g = random_game();
        const auto nash = games::pure_nash_equilibria(g);
        CHECK(nash == brute_nash(g));
        const auto dom = games::dominant_strategies(g);
        CHECK(dom[0] == brute_dominant(g, 0));
        CHECK(dom[1] == brute_dominant(g, 1));
        if (dom[0] && dom[1]) {
            CHECK(std::find(nash.begin(), nash.end(), Profile{*dom[0], *dom[1]}) != nash.end());
        }
        const auto d = games::dual(g);
        CHECK(games::pure_nash_equilibria(d) == nash);
        CHECK(games::dominant_strategies(d) == dom);
    }
}

TEST_CASE("non-finite payoffs are rejected") {
    auto g = games::prisoners_dilemma();
    g.payoffs[0][0].first = NAN;
    CHECK_THROWS_AS(games::validate(g), DomainError);
}

TEST_CASE("behavior matrix") {
    CHECK_THROWS_AS(games::BehaviorMatrix(1.2, 0.0), DomainError);
    CHECK_THROWS_AS(games::BehaviorMatrix(0.5, -0.1), DomainError);
    const games::BehaviorMatrix phi(0.8, 0.2);
    CHECK(phi.phi12() == doctest::Approx(0.2));
    CHECK(phi.phi22() == doctest::Approx(0.8));
    const auto m = phi.matrix();
    CHECK(m(0, 0) + m(0, 1) == 1.0);
    CHECK(m(1, 0) + m(1, 1) == 1.0);
}

TEST_CASE("property: a row-stochastic matrix has eigenvalues 1 and phi11 - phi21") {
    for (int trial = 0; trial < 200; ++trial) {
        const double a = support::uniform(0, 1);
        const double b = support::uniform(0, 1);
        const auto e = games::phi_eigen(games::BehaviorMatrix(a, b));
        const double other = a - b;
        const bool one_first = std::abs(e[0].value - 1.0) < 1e-12;
        CHECK(one_first);
        CHECK(std::abs(e[1].value - other) < 1e-12);
        CHECK(std::abs(e[0].vector[0] - e[0].vector[1]) < 1e-12);
    }
}
