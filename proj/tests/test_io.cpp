#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>

#include "ionsplit/ansatz.hpp"
#include "ionsplit/errors.hpp"
#include "ionsplit/io.hpp"
#include "ionsplit/shooting.hpp"
#include "ionsplit/trap_spec.hpp"
#include "ionsplit/waveform.hpp"

using namespace ionsplit;

namespace {

std::string temp_path(const char* stem) {
    return std::string("io_test_") + stem;
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

} // namespace

TEST_CASE("format_full round-trips doubles bit-exactly") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng) * std::pow(10.0, (i % 61) - 30);
        const double back = std::stod(io::format_full(x));
        CHECK(back == x);
    }
    CHECK(io::format_full(0.25) == "0.25");
    CHECK(io::format_full(-2.0) == "-2");
}

TEST_CASE("fnv1a: stable known vectors") {
    // reference values of 64-bit FNV-1a
    CHECK(io::fnv1a("") == 14695981039346656037ull);
    CHECK(io::fnv1a("a") == 12638187200555641996ull);
    CHECK(io::fnv1a("foobar") == 9625390261332436968ull);
    CHECK(io::fnv1a_hex("foobar") == "85944171f73967e8");
    CHECK(io::fnv1a("x") != io::fnv1a("y"));
}

TEST_CASE("text file round-trip") {
    const std::string path = temp_path("text.txt");
    const std::string content = "line one\nline two\n";
    io::write_text(path, content);
    CHECK(io::read_text(path) == content);
    std::remove(path.c_str());
    CHECK_THROWS(io::read_text(path));
}

TEST_CASE("waveform csv: header, row count, SI endpoint values") {
    const TrapSpec trap = make_trap_spec("Be9+", 2.0e6);
    const auto design = make_design(trap.coulomb, 40.0, 10.0, 9, {});
    const Waveform wf = sample_design(design, 101);
    const std::string csv = io::waveform_csv(wf, trap);

    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t_s,alpha_si,beta_si,d_si,omega_minus,omega_plus");
    CHECK(count_lines(csv) == 102);

    // first data row: t=0, alpha = m omega0^2/2, d = d0, omega_plus = sqrt(3) omega0
    std::string row;
    std::getline(in, row);
    std::replace(row.begin(), row.end(), ',', ' ');
    std::istringstream fields(row);
    double t_s, alpha_si, beta_si, d_si, womi, wpl;
    fields >> t_s >> alpha_si >> beta_si >> d_si >> womi >> wpl;
    CHECK(t_s == 0.0);
    CHECK(alpha_si ==
          doctest::Approx(0.5 * trap.mass_kg * trap.omega0_rad_s * trap.omega0_rad_s)
              .epsilon(1e-10));
    CHECK(std::abs(beta_si) < 1e-6); // ~1e-12 internal, tiny in N/m^3 too
    CHECK(d_si == doctest::Approx(trap.d0_m).epsilon(1e-10));
    CHECK(womi == doctest::Approx(trap.omega0_rad_s).epsilon(1e-10));
    CHECK(wpl == doctest::Approx(std::sqrt(3.0) * trap.omega0_rad_s).epsilon(1e-10));
}

TEST_CASE("design json replays to an identical protocol") {
    const TrapSpec trap = make_trap_spec("Ca40+", 1.3e6);
    const auto design = make_design(trap.coulomb, 52.7, 10.0, 11, {3.25, -1.5});
    const nlohmann::json j = io::design_json(design, trap);

    CHECK(j.at("format") == "ionsplit-design-v1");
    CHECK(j.contains("config_hash"));

    TrapSpec trap2;
    const SeparationDesign replay = io::design_from_json(j, trap2);
    CHECK(trap2.coulomb == doctest::Approx(trap.coulomb).epsilon(1e-14));
    CHECK(replay.t_f == design.t_f);
    CHECK(replay.order == design.order);
    CHECK(replay.free_params == design.free_params);
    CHECK(replay.gamma_plus == design.gamma_plus);
    for (double t : {0.0, 13.0, 29.9, 52.7}) {
        const DesignPoint a = design.at(t);
        const DesignPoint b = replay.at(t);
        CHECK(a.alpha == b.alpha);
        CHECK(a.beta == b.beta);
        CHECK(a.d == b.d);
    }
}

TEST_CASE("design json rejects foreign documents") {
    CHECK_THROWS_AS(io::design_from_json(nlohmann::json{{"format", "something-else"}}),
                    ConfigError);
}

TEST_CASE("trap json round-trip") {
    const TrapSpec trap = make_trap_spec("Be9+", 3.0e6);
    const TrapSpec back = io::trap_from_json(io::trap_json(trap));
    CHECK(back.mass_kg == trap.mass_kg);
    CHECK(back.charge_C == trap.charge_C);
    CHECK(back.omega0_rad_s == doctest::Approx(trap.omega0_rad_s).epsilon(1e-15));
    CHECK(back.coulomb == doctest::Approx(trap.coulomb).epsilon(1e-14));
}

TEST_CASE("shooting and report json carry the headline numbers") {
    const TrapSpec trap = make_trap_spec("Be9+", 2.0e6);
    ShootingResult sr;
    sr.design = make_design(trap.coulomb, 65.0, 10.0, 11, {1.0, 2.0});
    sr.objective = 3.5e-12;
    sr.converged = true;
    sr.iterations = 123;
    const nlohmann::json js = io::shooting_json(sr, trap);
    CHECK(js.at("converged") == true);
    CHECK(js.at("iterations") == 123);
    CHECK(js.at("objective_quanta").get<double>() == doctest::Approx(3.5e-12));

    ExcitationReport rep;
    rep.method = "classical";
    rep.energy_final = 10.0;
    rep.energy_reference = 9.5;
    rep.excitation_quanta = 0.5;
    rep.per_mode = ModeSplit{0.1, 0.2};
    const nlohmann::json jr = io::report_json(rep, trap);
    CHECK(jr.at("method") == "classical");
    CHECK(jr.at("excitation_quanta").get<double>() == doctest::Approx(0.5));
    CHECK(jr.at("per_mode").at("plus_quanta").get<double>() == doctest::Approx(0.2));
}

TEST_CASE("wavefunction binary snapshot round-trips bit-exactly") {
    GridSpec g;
    g.n_Q = 12;
    g.Q_min = -2.0;
    g.Q_max = 2.0;
    g.n_r = 20;
    g.r_min = 5.0;
    g.r_max = 9.0;
    GridWavefunction psi = gaussian_packet(g, 0.3, 7.0, 0.5, 0.6);
    psi.t = 4.25;

    const std::string path = temp_path("state.wfn");
    io::write_wavefunction(path, psi);
    const GridWavefunction back = io::read_wavefunction(path);
    std::remove(path.c_str());

    CHECK(back.grid.n_Q == g.n_Q);
    CHECK(back.grid.n_r == g.n_r);
    CHECK(back.grid.Q_min == g.Q_min);
    CHECK(back.grid.r_max == g.r_max);
    CHECK(back.t == psi.t);
    REQUIRE(back.amp.size() == psi.amp.size());
    for (std::size_t i = 0; i < psi.amp.size(); ++i) CHECK(back.amp[i] == psi.amp[i]);
}

TEST_CASE("marginals csv shape") {
    GridSpec g;
    g.n_Q = 8;
    g.Q_min = -1.0;
    g.Q_max = 1.0;
    g.n_r = 16;
    g.r_min = 3.0;
    g.r_max = 5.0;
    const GridWavefunction psi = gaussian_packet(g, 0.0, 4.0, 0.3, 0.3);
    const Marginals m = marginals(psi);
    const std::string csv = io::marginals_csv(m);
    CHECK(csv.rfind("axis,coordinate,density", 0) == 0);
    CHECK(count_lines(csv) == 1 + 8 + 16);
}
