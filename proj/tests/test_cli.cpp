#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "invosc/cli.hpp"

using namespace invosc;
using namespace invosc::cli;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

RunConfig config(Command c) {
    RunConfig cfg;
    cfg.command = c;
    return cfg;
}

} // namespace

TEST(Parse, ComplexLiterals) {
    EXPECT_EQ(parse_complex("1"), std::complex<double>(1.0, 0.0));
    EXPECT_EQ(parse_complex("2i"), std::complex<double>(0.0, 2.0));
    EXPECT_EQ(parse_complex("-i"), std::complex<double>(0.0, -1.0));
    EXPECT_EQ(parse_complex("1.5-2i"), std::complex<double>(1.5, -2.0));
    EXPECT_EQ(parse_complex("1e-3+2e-1i"), std::complex<double>(1e-3, 0.2));
    EXPECT_EQ(parse_complex(" 3 + i "), std::complex<double>(3.0, 1.0));
    EXPECT_THROW(parse_complex("1+zi"), ParameterError);
    EXPECT_THROW(parse_complex(""), ParameterError);
}

TEST(Parse, Angles) {
    EXPECT_DOUBLE_EQ(parse_angle("-pi/4"), -M_PI / 4.0);
    EXPECT_DOUBLE_EQ(parse_angle("pi"), M_PI);
    EXPECT_DOUBLE_EQ(parse_angle("0.25"), 0.25);
    EXPECT_THROW(parse_angle("pie"), ParameterError);
    EXPECT_THROW(parse_angle("0.2x"), ParameterError);
}

TEST(Format, SeventeenSignificantDigitsRoundTrip) {
    const double v = 0.1 + 0.2;
    EXPECT_EQ(std::stod(fmt(v)), v);
    EXPECT_EQ(fmt(0.5), "0.5");
}

TEST(Config, CouplingGridAndValidation) {
    RunConfig cfg;
    cfg.g_min = 0.0;
    cfg.g_max = 2.0;
    cfg.g_step = 0.01;
    const auto g = cfg.coupling_grid();
    EXPECT_EQ(g.size(), 201u);
    EXPECT_DOUBLE_EQ(g[100], 1.0);
    cfg.g_step = 0.0;
    EXPECT_THROW(cfg.validate(), ParameterError);
    cfg = RunConfig{};
    cfg.truncation = 2;
    EXPECT_THROW(cfg.validate(), ParameterError);
    cfg = RunConfig{};
    cfg.x_min = 1.0;
    cfg.x_max = 0.0;
    EXPECT_THROW(cfg.validate(), ParameterError);
}

TEST(Spectrum, SingleGroundLevel) {
    RunConfig cfg = config(Command::Spectrum);
    cfg.g_values = {0.0};
    cfg.levels = 1;
    std::ostringstream os;
    cmd_spectrum(cfg, os);
    const auto rows = parse_csv(os.str());
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"g", "level", "re_eigenvalue", "im_eigenvalue", "branch"}));
    EXPECT_DOUBLE_EQ(std::stod(rows[1][3]), 0.5);
    EXPECT_EQ(rows[1][4], "imaginary_pair");
}

TEST(Spectrum, RealBranchValue) {
    RunConfig cfg = config(Command::Spectrum);
    cfg.g_values = {1.3};
    cfg.levels = 1;
    std::ostringstream os;
    cmd_spectrum(cfg, os);
    const auto rows = parse_csv(os.str());
    EXPECT_NEAR(std::stod(rows[1][2]), 0.415331, 1e-6);
    EXPECT_LT(std::abs(std::stod(rows[1][3])), 1e-8);
    EXPECT_EQ(rows[1][4], "real");
}

TEST(Spectrum, JsonFormat) {
    RunConfig cfg = config(Command::Spectrum);
    cfg.g_values = {0.6};
    cfg.levels = 2;
    cfg.format = Format::Json;
    std::ostringstream os;
    cmd_spectrum(cfg, os);
    const json doc = json::parse(os.str());
    ASSERT_EQ(doc.size(), 2u);
    EXPECT_NEAR(doc[1]["im_eigenvalue"].get<double>(), 1.2, 1e-10);
}

TEST(Spectrum, OutputIsDeterministic) {
    RunConfig cfg = config(Command::Spectrum);
    cfg.g_min = 0.5;
    cfg.g_max = 1.5;
    cfg.g_step = 0.25;
    cfg.truncation = 48;
    std::ostringstream a;
    std::ostringstream b;
    cmd_spectrum(cfg, a);
    cfg.threads = 1;
    cmd_spectrum(cfg, b);
    EXPECT_EQ(a.str(), b.str());
}

TEST(Potential, DefaultCurvesAndValues) {
    RunConfig cfg = config(Command::Potential);
    cfg.x_min = -1.0;
    cfg.x_max = 1.0;
    cfg.points = 5;
    std::ostringstream os;
    cmd_potential(cfg, os);
    const auto rows = parse_csv(os.str());
    ASSERT_EQ(rows.size(), 1u + 5u * 5u);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const double g = std::stod(rows[r][0]);
        const double x = std::stod(rows[r][1]);
        const double v = std::stod(rows[r][2]);
        if (g == 1.0) {
            EXPECT_EQ(v, 0.0);
        }
        if (g == 1.7 && x == 1.0) {
            EXPECT_NEAR(v, 0.687386, 1e-6);
        }
    }
    // G = 0.3 rows at x = -1 and x = +1 are equal
    EXPECT_EQ(rows[1][2], rows[5][2]);
}

TEST(Eigenfunction, CoefficientStrings) {
    RunConfig cfg = config(Command::Eigenfunction);
    cfg.n = 2;
    cfg.points = 3;
    std::ostringstream os;
    cmd_eigenfunction(cfg, os);
    const json doc = json::parse(os.str());
    EXPECT_EQ(doc["coefficients"], json({"4", "0", "2i"}));
    EXPECT_EQ(doc["exact_coefficients"][2]["im"], "2");
    EXPECT_EQ(doc["samples"].size(), 3u);
    EXPECT_EQ(doc["branch"], "ket");
}

TEST(Eigenfunction, BraBranchIsConjugate) {
    RunConfig cfg = config(Command::Eigenfunction);
    cfg.n = 3;
    cfg.branch = exact::HalfBranch::Bra;
    cfg.points = 2;
    std::ostringstream os;
    cmd_eigenfunction(cfg, os);
    const json doc = json::parse(os.str());
    EXPECT_EQ(doc["coefficients"], json({"8", "0", "-12i", "0"}));
}

TEST(Resonances, GroundTarget) {
    RunConfig cfg = config(Command::Resonances);
    cfg.levels = 1;
    std::ostringstream os;
    const auto warnings = cmd_resonances(cfg, os);
    EXPECT_TRUE(warnings.empty());
    const auto rows = parse_csv(os.str());
    EXPECT_DOUBLE_EQ(std::stod(rows[1][4]), 0.5);
    EXPECT_LT(std::stod(rows[1][5]), 1e-3);
}

TEST(Classical, SinhOrbit) {
    RunConfig cfg = config(Command::Classical);
    cfg.x0 = 0.0;
    cfg.p0 = 1.0;
    cfg.dt = 1e-3;
    cfg.steps = 3000;
    std::ostringstream os;
    cmd_classical(cfg, os);
    const auto rows = parse_csv(os.str());
    EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "re_x", "im_x", "re_p", "im_p", "re_H", "im_H"}));
    ASSERT_EQ(rows.size(), 3002u);
    EXPECT_NEAR(std::stod(rows.back()[1]), 10.01787, 1e-5);
}

TEST(Verify, SmallTruncationSkipsGatedChecks) {
    RunConfig cfg = config(Command::Verify);
    cfg.truncation = 8;
    const ReportDocument rep = run_verification(cfg);
    EXPECT_TRUE(rep.passed());
    bool any_skipped = false;
    for (const auto& c : rep.checks)
        any_skipped = any_skipped || c.status == CheckStatus::Skipped;
    EXPECT_TRUE(any_skipped);
    const json doc = rep.to_json();
    EXPECT_EQ(doc["status"], "pass");
}

TEST(Verify, PerturbedEtaFailsGaugeCheck) {
    RunConfig cfg = config(Command::Verify);
    cfg.truncation = 8;
    cfg.perturb_eta = 1e-3;
    const ReportDocument rep = run_verification(cfg);
    EXPECT_FALSE(rep.passed());
    EXPECT_EQ(rep.failing(), std::vector<std::string>{"gauge_identity"});
}

TEST(Verify, ReportLogsRandomPoints) {
    RunConfig cfg = config(Command::Verify);
    cfg.truncation = 8;
    const json doc = run_verification(cfg).to_json();
    for (const auto& c : doc["checks"])
        if (c["name"] == "gauge_identity") {
            EXPECT_EQ(c["parameters"]["points_re_x_im_x_re_p_im_p"].size(), 1000u);
            EXPECT_EQ(c["parameters"]["seed"], cfg.seed);
        }
}
