#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "pondwatch/fixtures.hpp"
#include "pondwatch/rng.hpp"
#include "pondwatch/sensors.hpp"

using namespace pondwatch;

TEST_CASE("ultrasonic distance follows the echo law") {
    UltrasonicModel model{340.0, 2.0};
    CHECK(ultrasonic_distance(0.0, model) == doctest::Approx(0.0));
    CHECK(ultrasonic_distance(0.002, model) == doctest::Approx(0.34).epsilon(1e-12));
    CHECK(ultrasonic_distance(0.01, UltrasonicModel{300.0, 2.0}) ==
          doctest::Approx(1.5).epsilon(1e-12));
    CHECK_THROWS_AS(ultrasonic_distance(-1e-9, model), DomainError);
}

TEST_CASE("ultrasonic distance is linear in travel time") {
    UltrasonicModel model{340.0, 5.0};
    Rng rng(99);
    for (int i = 0; i < 1000; ++i) {
        const double a = rng.uniform(0.0, 0.01);
        const double b = rng.uniform(0.0, 0.01);
        CHECK(ultrasonic_distance(a + b, model) ==
              doctest::Approx(ultrasonic_distance(a, model) + ultrasonic_distance(b, model))
                  .epsilon(1e-12));
    }
}

TEST_CASE("depth from echo complements the distance") {
    UltrasonicModel model{340.0, 2.0};
    CHECK(depth_from_echo(0.0, model) == doctest::Approx(2.0));
    CHECK(depth_from_echo(0.002, model) == doctest::Approx(1.66).epsilon(1e-12));
    CHECK_THROWS_AS(depth_from_echo(0.02, model), DomainError);  // 3.4 m > 2 m mount

    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const double t = rng.uniform(0.0, 2.0 * model.sensor_height_m / model.speed_of_sound_m_s);
        CHECK(depth_from_echo(t, model) + ultrasonic_distance(t, model) ==
              doctest::Approx(model.sensor_height_m).epsilon(1e-12));
    }
}

TEST_CASE("conductivity compensation is anchored at 25 C") {
    CHECK(conductivity_from_temperature(1000.0, 25.0, 0.02) == doctest::Approx(1000.0));
    CHECK(conductivity_from_temperature(1000.0, 26.0, 0.02) ==
          doctest::Approx(1020.0).epsilon(1e-12));
    CHECK(conductivity_from_temperature(1413.0, 25.0, 0.02) == doctest::Approx(1413.0));
    CHECK_THROWS_AS(conductivity_from_temperature(0.0, 25.0, 0.02), DomainError);
    CHECK_THROWS_AS(conductivity_from_temperature(1000.0, 25.0, 0.05), DomainError);

    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const double coeff = rng.uniform(0.001, 0.04);
        CHECK(conductivity_from_temperature(500.0, 25.0, coeff) == doctest::Approx(500.0));
    }
}

TEST_CASE("temperature quantization snaps to the bit grid") {
    CHECK(quantize_temperature(21.06, 12) == doctest::Approx(21.0625));
    CHECK(quantize_temperature(17.6, 9) == doctest::Approx(17.5));
    CHECK(quantize_temperature(0.0, 10) == doctest::Approx(0.0));
    CHECK_THROWS_AS(quantize_temperature(20.0, 8), DomainError);
    CHECK_THROWS_AS(quantize_temperature(20.0, 13), DomainError);
    CHECK_THROWS_AS(quantize_temperature(130.0, 12), DomainError);

    // Idempotence across the full bit range.
    Rng rng(11);
    for (int bits = 9; bits <= 12; ++bits) {
        for (int i = 0; i < 250; ++i) {
            const double t = rng.uniform(-55.0, 125.0);
            const double q = quantize_temperature(t, bits);
            CHECK(quantize_temperature(q, bits) == doctest::Approx(q).epsilon(1e-12));
        }
    }
}

TEST_CASE("turbidity voltage map hits both anchors and the midpoint") {
    TurbidityCalibration cal;
    CHECK(turbidity_from_voltage(cal.v_clear, cal) == doctest::Approx(0.0));
    CHECK(turbidity_from_voltage(cal.v_opaque, cal) == doctest::Approx(cal.ntu_max));
    CHECK(turbidity_from_voltage(3.35, cal) == doctest::Approx(1500.0).epsilon(1e-12));
    CHECK_THROWS_AS(turbidity_from_voltage(-0.1, cal), DomainError);
    CHECK_THROWS_AS(turbidity_from_voltage(4.6, cal), DomainError);

    // Monotonically non-increasing over [v_opaque, v_clear].
    double previous = turbidity_from_voltage(cal.v_opaque, cal);
    for (double v = cal.v_opaque; v <= cal.v_clear; v += 0.01) {
        const double ntu = turbidity_from_voltage(v, cal);
        CHECK(ntu <= previous + 1e-12);
        previous = ntu;
    }
}

TEST_CASE("pond stream: tick count, determinism and envelope clamping") {
    const PondProfile pond1 = built_in_profile(1);

    const auto single = simulate_pond_stream(pond1, 10, 10, 7);
    CHECK(single.size() == 5);  // one tick, one sample per parameter
    std::set<Parameter> parameters;
    for (const auto& s : single) parameters.insert(s.parameter);
    CHECK(parameters.size() == 5);

    const auto a = simulate_pond_stream(pond1, 500, 10, 42);
    const auto b = simulate_pond_stream(pond1, 500, 10, 42);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].timestamp_s == b[i].timestamp_s);
        CHECK(a[i].parameter == b[i].parameter);
        CHECK(a[i].value == b[i].value);  // bit identical
    }

    int differing_pairs = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto x = simulate_pond_stream(pond1, 200, 10, seed);
        const auto y = simulate_pond_stream(pond1, 200, 10, seed + 1000);
        bool any_diff = false;
        for (std::size_t i = 0; i < x.size(); ++i) any_diff |= (x[i].value != y[i].value);
        differing_pairs += any_diff ? 1 : 0;
    }
    CHECK(differing_pairs == 10);

    // Pond-5 pH stays inside the published envelope after clamping.
    const PondProfile pond5 = built_in_profile(5);
    const auto stream = simulate_pond_stream(pond5, 200, 10, 3);
    for (const auto& s : stream) {
        const Interval& envelope = pond5.envelope(s.parameter);
        CHECK(s.value >= envelope.lo);
        CHECK(s.value <= envelope.hi);
        if (s.parameter == Parameter::Ph) {
            CHECK(s.value >= 3.84);
            CHECK(s.value <= 3.95);
        }
    }

    CHECK_THROWS_AS(simulate_pond_stream(pond1, 0, 10, 1), ValidationError);
    CHECK_THROWS_AS(simulate_pond_stream(pond1, 10, 0, 1), ValidationError);
}

TEST_CASE("stream timestamps are non-decreasing and cover duration/interval ticks") {
    const auto stream = simulate_pond_stream(built_in_profile(2), 3180, 150, 42);
    CHECK(stream.size() == 22 * 5);
    std::int64_t last = 0;
    for (const auto& s : stream) {
        CHECK(s.timestamp_s >= last);
        last = s.timestamp_s;
    }
    CHECK(last == 3150);
}

TEST_CASE("fixture tables match the published sessions") {
    CHECK(fixtures::table(1, Parameter::Ph)[0] == doctest::Approx(7.67));
    CHECK(fixtures::table(2, Parameter::ConductivityUsCm)[19] == doctest::Approx(1013.97));
    for (double v : fixtures::table(4, Parameter::TurbidityNtu)) {
        CHECK(v >= 3.60);
        CHECK(v <= 3.62);
    }
    CHECK_THROWS_AS(fixtures::table(6, Parameter::Ph), NotFoundError);
    CHECK_THROWS_AS(fixtures::table(1, Parameter::DoMgL), NotFoundError);
    CHECK(fixtures::has_table(Parameter::TemperatureC));
    CHECK_FALSE(fixtures::has_table(Parameter::BodMgL));
}

TEST_CASE("fixture envelopes equal the published per-pond ranges") {
    struct Expected {
        int pond;
        Parameter parameter;
        double lo, hi;
    };
    const Expected expected[] = {
        {1, Parameter::Ph, 6.02, 8.39},         {2, Parameter::Ph, 8.57, 8.87},
        {3, Parameter::Ph, 6.00, 7.83},         {4, Parameter::Ph, 6.51, 8.30},
        {5, Parameter::Ph, 3.84, 3.95},         {1, Parameter::TurbidityNtu, 3.55, 3.57},
        {2, Parameter::TurbidityNtu, 3.41, 3.50}, {3, Parameter::TurbidityNtu, 3.31, 3.49},
        {4, Parameter::TurbidityNtu, 3.60, 3.62}, {5, Parameter::TurbidityNtu, 3.56, 3.58},
        {1, Parameter::TemperatureC, 17.50, 17.75},
        {2, Parameter::TemperatureC, 17.75, 18.00},
        {3, Parameter::TemperatureC, 20.87, 21.06},
        {1, Parameter::ConductivityUsCm, 989.10, 1003.23},
        {2, Parameter::ConductivityUsCm, 1003.23, 1017.36},
        {3, Parameter::ConductivityUsCm, 1179.57, 1190.32},
    };
    for (const Expected& e : expected) {
        auto values = fixtures::table(e.pond, e.parameter);
        CHECK(*std::min_element(values.begin(), values.end()) == doctest::Approx(e.lo));
        CHECK(*std::max_element(values.begin(), values.end()) == doctest::Approx(e.hi));
    }
    // Every table is 20 samples x 5 ponds.
    for (int pond = 1; pond <= fixtures::kPondCount; ++pond) {
        for (Parameter p : {Parameter::Ph, Parameter::TemperatureC, Parameter::TurbidityNtu,
                            Parameter::ConductivityUsCm}) {
            CHECK(fixtures::table(pond, p).size() == 20);
        }
    }
}

TEST_CASE("fixture CSV export carries every sample") {
    const std::string csv = fixtures::to_csv();
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "pond_id,parameter,sample_index,value");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 5 * 4 * 20);
    CHECK(csv.find("1,ph,0,7.67") != std::string::npos);
    CHECK(csv.find("5,ph,19,3.95") != std::string::npos);
}

TEST_CASE("built-in profiles carry the surveyed dimensions") {
    const PondProfile p4 = built_in_profile(4);
    CHECK(p4.length_m == 156);
    CHECK(p4.width_m == 80);
    CHECK(p4.depth_range_m.lo == 2);
    CHECK(p4.depth_range_m.hi == 4);
    CHECK_THROWS_AS(built_in_profile(0), NotFoundError);
    const PondProfile p1 = built_in_profile(1);
    CHECK(p1.ph.lo == doctest::Approx(6.02));
    CHECK(p1.ph.hi == doctest::Approx(8.39));
}

TEST_CASE("lab readings for pond 1") {
    const auto lab = fixtures::pond1_lab_readings();
    CHECK(lab.dissolved_oxygen == doctest::Approx(6.79));
    CHECK(lab.bod == doctest::Approx(7.0));
    CHECK(lab.cod == doctest::Approx(12.0));
}
