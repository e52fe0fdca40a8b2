#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "donn/device.hpp"
#include "donn/rng.hpp"

using namespace donn;

namespace {
const Vo2Params nominal{};  // 2 V / 1 V / 100 kohm / 1 kohm / 100 ns / 40 V^-1
}

TEST_CASE("conductance endpoints and midpoint") {
    CHECK(vo2_conductance(0.0, nominal) == doctest::Approx(1e-5).epsilon(1e-12));
    CHECK(vo2_conductance(1.0, nominal) == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(vo2_conductance(0.5, nominal) == doctest::Approx(5.05e-4).epsilon(1e-12));
    // clamped outside [0, 1]
    CHECK(vo2_conductance(-0.5, nominal) == vo2_conductance(0.0, nominal));
    CHECK(vo2_conductance(1.5, nominal) == vo2_conductance(1.0, nominal));
}

TEST_CASE("conductance is monotone in s") {
    Rng rng(11);
    for (int k = 0; k < 200; ++k) {
        const double a = rng.next_double();
        const double b = rng.next_double();
        if (a <= b) {
            CHECK(vo2_conductance(a, nominal) <= vo2_conductance(b, nominal));
        } else {
            CHECK(vo2_conductance(a, nominal) >= vo2_conductance(b, nominal));
        }
    }
}

TEST_CASE("threshold interpolates between V_H and V_L") {
    CHECK(vo2_threshold(0.0, nominal) == doctest::Approx(2.0));
    CHECK(vo2_threshold(1.0, nominal) == doctest::Approx(1.0));
    CHECK(vo2_threshold(0.5, nominal) == doctest::Approx(1.5));
}

TEST_CASE("comparator transfer curve") {
    CHECK(comparator_output(1.3, 1.3, nominal) == doctest::Approx(0.5));
    CHECK(comparator_output(100.0, 0.0, nominal) == doctest::Approx(1.0));
    CHECK(comparator_output(0.0, 100.0, nominal) == doctest::Approx(0.0));
    const double dv = 1.0 / (2.0 * nominal.cmp_slope);
    CHECK(comparator_output(dv, 0.0, nominal) == doctest::Approx(0.5 * (1.0 + std::tanh(1.0))));
    // strictly increasing in (v_plus - v_minus)
    double prev = -1.0;
    for (double d = -0.2; d <= 0.2; d += 0.01) {
        const double c = comparator_output(d, 0.0, nominal);
        CHECK(c > prev);
        CHECK(c > 0.0);
        CHECK(c < 1.0);
        prev = c;
    }
}

TEST_CASE("state derivative fixed point and saturation") {
    CHECK(vo2_state_derivative(vo2_threshold(0.5, nominal), 0.5, nominal) == doctest::Approx(0.0));
    CHECK(vo2_state_derivative(10.0, 0.0, nominal) == doctest::Approx(1e7).epsilon(1e-6));
    CHECK(vo2_state_derivative(-10.0, 1.0, nominal) == doctest::Approx(-1e7).epsilon(1e-6));
}

TEST_CASE("ideal switch hysteresis window") {
    CHECK(ideal_switch_update(2.1, SwitchState::Insulating, nominal) == SwitchState::Metallic);
    CHECK(ideal_switch_update(1.5, SwitchState::Insulating, nominal) == SwitchState::Insulating);
    CHECK(ideal_switch_update(1.5, SwitchState::Metallic, nominal) == SwitchState::Metallic);
    CHECK(ideal_switch_update(0.9, SwitchState::Metallic, nominal) == SwitchState::Insulating);
    CHECK(ideal_switch_update(2.0, SwitchState::Insulating, nominal) == SwitchState::Metallic);
    CHECK(ideal_switch_update(1.0, SwitchState::Metallic, nominal) == SwitchState::Insulating);
}

TEST_CASE("quasi-static sweep traces the hysteresis loop") {
    // Drive the state ODE with a slow voltage ramp 0 -> 2.5 V -> 0 and find
    // where s crosses 0.5 on each leg.
    const double ramp_time = 200e-6;
    const double dt = 1e-9;
    double s = 0.0;
    double up_mid = -1.0, down_mid = -1.0;
    const int steps = static_cast<int>(ramp_time / dt);
    for (int leg = 0; leg < 2; ++leg) {
        for (int i = 0; i < steps; ++i) {
            const double frac = static_cast<double>(i) / steps;
            const double v = 2.5 * (leg == 0 ? frac : 1.0 - frac);
            const double s_prev = s;
            s += dt * vo2_state_derivative(v, s, nominal);
            if (leg == 0 && s_prev < 0.5 && s >= 0.5) up_mid = v;
            if (leg == 1 && s_prev > 0.5 && s <= 0.5) down_mid = v;
        }
    }
    const double width = 3.0 / nominal.cmp_slope;
    REQUIRE(up_mid > 0.0);
    REQUIRE(down_mid > 0.0);
    CHECK(std::abs(up_mid - nominal.v_high) < width);
    CHECK(std::abs(down_mid - nominal.v_low) < width);
}

TEST_CASE("state stays in [0,1] under random bounded drive") {
    Rng rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        double s = rng.next_double();
        const double dt = 1e-9;
        for (int i = 0; i < 5000; ++i) {
            const double v = 5.0 * (rng.next_double() - 0.5);
            s += dt * vo2_state_derivative(v, s, nominal);
            CHECK(s >= -1e-9);
            CHECK(s <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("parameter validation") {
    Vo2Params bad = nominal;
    bad.v_low = 3.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = nominal;
    bad.r_low = 200e3;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = nominal;
    bad.tau = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_NOTHROW(nominal.validate());
}
