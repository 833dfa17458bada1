#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "invosc/cli.hpp"

namespace {

using invosc::cli::Command;
using invosc::cli::Format;
using invosc::cli::RunConfig;

struct RawFlags {
    std::string theta = "-pi/4";
    std::string x0 = "0";
    std::string p0 = "1";
};

void add_physics(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--omega", cfg.omega, "slope frequency Omega")->capture_default_str();
}

void add_couplings(CLI::App* sub, RunConfig& cfg, bool range) {
    auto* g = sub->add_option("--g", cfg.g_values, "coupling value(s); repeat or comma-separate")->delimiter(',');
    if (range) {
        auto* lo = sub->add_option("--g-min", cfg.g_min, "sweep start")->capture_default_str();
        auto* hi = sub->add_option("--g-max", cfg.g_max, "sweep end")->capture_default_str();
        auto* st = sub->add_option("--g-step", cfg.g_step, "sweep step")->capture_default_str();
        g->excludes(lo)->excludes(hi)->excludes(st);
    }
}

void add_grid(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--x-min", cfg.x_min, "grid start")->capture_default_str();
    sub->add_option("--x-max", cfg.x_max, "grid end")->capture_default_str();
    sub->add_option("--points", cfg.points, "grid points")->capture_default_str();
}

void add_output(CLI::App* sub, RunConfig& cfg) {
    static const std::map<std::string, Format> formats{{"csv", Format::Csv}, {"json", Format::Json}};
    sub->add_option("--format", cfg.format, "csv or json")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    sub->add_option("--out", cfg.out, "output path (default stdout)");
}

int run(int argc, char** argv) {
    RunConfig cfg;
    RawFlags raw;
    CLI::App app{"Inverted-oscillator spectra, eigenfunctions, resonances and classical orbits"};
    app.require_subcommand(1);

    auto* spectrum = app.add_subcommand("spectrum", "low levels over a coupling sweep (CSV: g, level, re, im, branch)");
    add_physics(spectrum, cfg);
    add_couplings(spectrum, cfg, true);
    spectrum->add_option("--levels", cfg.levels, "levels per coupling")->capture_default_str();
    spectrum->add_option("--truncation", cfg.truncation, "Fock dimension")->capture_default_str();
    spectrum->add_option("--threads", cfg.threads, "sweep workers (0 = all cores)")->capture_default_str();
    add_output(spectrum, cfg);

    static const std::map<std::string, invosc::PotentialConvention> conventions{
        {"frequency", invosc::PotentialConvention::Frequency},
        {"squared", invosc::PotentialConvention::FrequencySquared}};
    auto* potential = app.add_subcommand("potential", "transformed potential curves (CSV: g, x, v)");
    add_physics(potential, cfg);
    add_couplings(potential, cfg, false);
    add_grid(potential, cfg);
    potential->add_option("--slope-convention", cfg.convention, "frequency or squared")
        ->transform(CLI::CheckedTransformer(conventions, CLI::ignore_case));
    add_output(potential, cfg);

    static const std::map<std::string, invosc::exact::HalfBranch> branches{
        {"ket", invosc::exact::HalfBranch::Ket}, {"bra", invosc::exact::HalfBranch::Bra}};
    auto* eigen = app.add_subcommand("eigenfunction", "exact polynomial eigenfunction (JSON)");
    add_physics(eigen, cfg);
    eigen->add_option("--n", cfg.n, "level index")->capture_default_str();
    eigen->add_option("--branch", cfg.branch, "ket or bra")->transform(CLI::CheckedTransformer(branches, CLI::ignore_case));
    add_grid(eigen, cfg);
    add_output(eigen, cfg);

    static const std::map<std::string, invosc::Stencil> stencils{
        {"central2", invosc::Stencil::Central2}, {"central4", invosc::Stencil::Central4},
        {"spectral", invosc::Stencil::Spectral}};
    auto* res = app.add_subcommand("resonances", "complex-scaled grid eigenvalues (CSV)");
    add_physics(res, cfg);
    add_grid(res, cfg);
    res->add_option("--theta", raw.theta, "scaling angle, number or multiple of pi")->capture_default_str();
    res->add_option("--levels", cfg.levels, "levels to report (<= 8)")->capture_default_str();
    res->add_option("--stencil", cfg.stencil, "central2, central4 or spectral")
        ->transform(CLI::CheckedTransformer(stencils, CLI::ignore_case));
    add_output(res, cfg);

    static const std::map<std::string, invosc::classical::Frame> frames{
        {"original", invosc::classical::Frame::Original}, {"transformed", invosc::classical::Frame::Transformed}};
    auto* cls = app.add_subcommand("classical", "complex classical trajectory (CSV: t, x, p, H)");
    add_physics(cls, cfg);
    cls->add_option("--g", cfg.g_values, "coupling")->expected(1);
    cls->add_option("--dt", cfg.dt, "RK4 step")->capture_default_str();
    cls->add_option("--steps", cfg.steps, "number of steps")->capture_default_str();
    cls->add_option("--x0", raw.x0, "initial position, complex as a+bi")->capture_default_str();
    cls->add_option("--p0", raw.p0, "initial momentum, complex as a+bi")->capture_default_str();
    cls->add_option("--frame", cfg.frame, "original or transformed")
        ->transform(CLI::CheckedTransformer(frames, CLI::ignore_case));
    add_output(cls, cfg);

    auto* verify = app.add_subcommand("verify", "run the invariant suite (JSON report; exit 0 iff all pass)");
    add_physics(verify, cfg);
    verify->add_option("--truncation", cfg.truncation, "Fock dimension")->capture_default_str();
    verify->add_option("--threads", cfg.threads, "sweep workers (0 = all cores)")->capture_default_str();
    verify->add_option("--perturb-eta", cfg.perturb_eta, "debug: offset eta in the gauge check")->capture_default_str();
    verify->add_option("--stencil", cfg.stencil, "grid stencil")->transform(CLI::CheckedTransformer(stencils, CLI::ignore_case));
    verify->add_option("--seed", cfg.seed, "seed for the random gauge points")->capture_default_str();
    add_output(verify, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return invosc::cli::kExitInvalidConfig;
    }

    std::ostringstream buffer;
    int code = invosc::cli::kExitOk;
    try {
        cfg.theta = invosc::cli::parse_angle(raw.theta);
        cfg.x0 = invosc::cli::parse_complex(raw.x0);
        cfg.p0 = invosc::cli::parse_complex(raw.p0);
        if (spectrum->parsed()) {
            cfg.command = Command::Spectrum;
            invosc::cli::cmd_spectrum(cfg, buffer);
        } else if (potential->parsed()) {
            cfg.command = Command::Potential;
            invosc::cli::cmd_potential(cfg, buffer);
        } else if (eigen->parsed()) {
            cfg.command = Command::Eigenfunction;
            invosc::cli::cmd_eigenfunction(cfg, buffer);
        } else if (res->parsed()) {
            cfg.command = Command::Resonances;
            for (const std::string& w : invosc::cli::cmd_resonances(cfg, buffer))
                std::cerr << "warning: " << w << '\n';
        } else if (cls->parsed()) {
            cfg.command = Command::Classical;
            invosc::cli::cmd_classical(cfg, buffer);
        } else {
            cfg.command = Command::Verify;
            if (!invosc::cli::cmd_verify(cfg, buffer))
                code = invosc::cli::kExitCheckFailure;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return invosc::cli::kExitInvalidConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return invosc::cli::kExitInvalidConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return invosc::cli::kExitCheckFailure;
    }

    if (cfg.out.empty()) {
        std::cout << buffer.str();
    } else {
        std::ofstream file(cfg.out);
        if (!file) {
            std::cerr << "cannot open " << cfg.out << '\n';
            return invosc::cli::kExitInvalidConfig;
        }
        file << buffer.str();
    }
    if (code == invosc::cli::kExitCheckFailure)
        std::cerr << "verification failed\n";
    return code;
}

} // namespace

int main(int argc, char** argv) { return run(argc, argv); }
