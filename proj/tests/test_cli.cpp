#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "../tools/config.hpp"

namespace {

struct RunResult {
    int exit_code;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(DIMER_CLI_PATH) + " " + args + " 2>&1";
    std::string output;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[512];
    while (fgets(buf, sizeof buf, pipe)) output += buf;
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Csv {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

Csv parse_csv(const std::string& text) {
    Csv csv;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            csv.comments.push_back(line);
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!header_seen) {
            csv.columns = cells;
            header_seen = true;
            continue;
        }
        std::vector<double> row;
        for (const auto& c : cells) row.push_back(std::strtod(c.c_str(), nullptr));
        csv.rows.push_back(std::move(row));
    }
    return csv;
}

std::string tmp_path(const std::string& name) {
    return std::string("/tmp/dimer_cli_test_") + name;
}

}  // namespace

TEST_CASE("config parser accepts the minimal bragg file") {
    cli::RunConfig c;
    cli::parse_config_text("kad = 3.141592653589793\nj = 1.0\n", "test", c);
    CHECK(c.kad == 3.141592653589793);
    CHECK(c.j == 1.0);
    cli::validate_config(c);
}

TEST_CASE("config parser rejects bad input with key and line") {
    cli::RunConfig c;
    try {
        cli::parse_config_text("j = 1\nl_over_d = 0.1\n", "test", c);
        FAIL("expected ConfigError");
    } catch (const cli::ConfigError& e) {
        CHECK(e.message.find("l_over_d") != std::string::npos);
        CHECK(e.message.find("test:2") != std::string::npos);
    }
    try {
        cli::parse_config_text("j = banana\n", "test", c);
        FAIL("expected ConfigError");
    } catch (const cli::ConfigError& e) {
        CHECK(e.message.find("'j'") != std::string::npos);
    }
    cli::RunConfig bad;
    bad.kad = -1.0;
    CHECK_THROWS_AS(cli::validate_config(bad), cli::ConfigError);
}

TEST_CASE("config echo round-trips") {
    cli::RunConfig c;
    c.task = "g2";
    c.j = 3.0;
    c.kad = 1.5707963267948966;
    c.d_over_l = 0.05;
    c.delta = 3.0;
    c.tau_points = 321;
    std::string echo;
    for (const auto& [key, value] : cli::config_items(c)) echo += key + " = " + value + "\n";
    cli::RunConfig back;
    cli::parse_config_text(echo, "echo", back);
    CHECK(back == c);
}

TEST_CASE("cli: invalid configs exit 2 with the offending key") {
    auto bad_value = run_cli("spectrum --kad -1 --out " + tmp_path("x.csv"));
    CHECK(bad_value.exit_code == 2);
    CHECK(bad_value.output.find("kad") != std::string::npos);

    auto unknown = run_cli("spectrum --l_over_d 0.1 --out " + tmp_path("x.csv"));
    CHECK(unknown.exit_code == 2);
    CHECK(unknown.output.find("l_over_d") != std::string::npos);

    auto no_task = run_cli("polish");
    CHECK(no_task.exit_code == 2);
}

TEST_CASE("cli: spectrum defaults reproduce the superradiant line") {
    const std::string out = tmp_path("spectrum.csv");
    auto res = run_cli("spectrum --out " + out);
    REQUIRE(res.exit_code == 0);
    auto csv = parse_csv(slurp(out));
    REQUIRE(csv.columns.size() == 6);
    CHECK(csv.columns[0] == "delta");
    CHECK(csv.columns[2] == "R");
    REQUIRE(csv.rows.size() == 1201);
    double best_delta = 0.0, best_r = -1.0;
    for (const auto& row : csv.rows) {
        CHECK(row[5] < 1e-10);  // lossless at gamma_prime = 0
        if (row[2] > best_r) {
            best_r = row[2];
            best_delta = row[0];
        }
    }
    CHECK(std::abs(best_delta - 1.9048374180359595) < 0.02);
    CHECK(best_r > 0.999);
}

TEST_CASE("cli: csv header echo re-parses to the run configuration") {
    const std::string out = tmp_path("echo.csv");
    auto res = run_cli("dynamics --j 2.5 --t_points 41 --out " + out);
    REQUIRE(res.exit_code == 0);
    std::string echo;
    std::istringstream in(slurp(out));
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0 && line.find(" = ") != std::string::npos)
            echo += line.substr(2) + "\n";
    }
    cli::RunConfig parsed;
    cli::parse_config_text(echo, "echo", parsed);
    CHECK(parsed.task == "dynamics");
    CHECK(parsed.j == 2.5);
    CHECK(parsed.t_points == 41);
    cli::validate_config(parsed);

    // Result metadata uses the '#:' marker, so the echo block of every task
    // stays re-parseable; check it on a g2 csv which carries flux metadata.
    const std::string g2_out = tmp_path("echo_g2.csv");
    REQUIRE(run_cli("g2 --preset fig6a --tau_points 11 --out " + g2_out).exit_code == 0);
    std::string g2_echo;
    std::istringstream g2_in(slurp(g2_out));
    while (std::getline(g2_in, line)) {
        if (line.rfind("# ", 0) == 0 && line.find(" = ") != std::string::npos)
            g2_echo += line.substr(2) + "\n";
    }
    cli::RunConfig g2_parsed;
    cli::parse_config_text(g2_echo, "echo", g2_parsed);
    CHECK(g2_parsed.task == "g2");
    CHECK(g2_parsed.tau_points == 11);
}

TEST_CASE("cli: g2 at the dark point exits 3 with a machine-readable reason") {
    char jbuf[32];
    std::snprintf(jbuf, sizeof jbuf, "%.17g", 0.5 * std::exp(0.05));
    auto res = run_cli(std::string("g2 --kad 1.5707963267948966 --d_over_l 0.05 --j ") + jbuf +
                       " --gamma_prime 0.05 --delta 0.3 --out " + tmp_path("zf.csv"));
    CHECK(res.exit_code == 3);
    CHECK(res.output.find("zero_flux") != std::string::npos);
    CHECK(res.output.find("zero reflected flux") != std::string::npos);
}

TEST_CASE("cli: beat period lands in the g2 csv") {
    const std::string out = tmp_path("g2.csv");
    auto res = run_cli(std::string("g2 --preset fig6b --out ") + out);
    REQUIRE(res.exit_code == 0);
    auto csv = parse_csv(slurp(out));
    REQUIRE(csv.rows.size() == 1001);
    // First local maximum near one beat period 2 pi / 4.7074 = 1.335.
    double first_max = 0.0;
    for (std::size_t i = 1; i + 1 < csv.rows.size(); ++i) {
        if (csv.rows[i][1] > csv.rows[i - 1][1] && csv.rows[i][1] >= csv.rows[i + 1][1]) {
            first_max = csv.rows[i][0];
            break;
        }
    }
    CHECK(std::abs(first_max - 1.335) < 0.1);
}

TEST_CASE("cli: deterministic output and svg emission") {
    const std::string out1 = tmp_path("det1.csv");
    const std::string out2 = tmp_path("det2.csv");
    const std::string svg = tmp_path("plot.svg");
    REQUIRE(run_cli("spectrum --preset fig4b --out " + out1 + " --svg " + svg).exit_code == 0);
    REQUIRE(run_cli("spectrum --preset fig4b --out " + out2).exit_code == 0);
    const std::string a = slurp(out1);
    CHECK(a == slurp(out2));

    const std::string plot = slurp(svg);
    CHECK(plot.find("<svg") != std::string::npos);
    CHECK(plot.find("<path") != std::string::npos);
    CHECK(plot.find("</svg>") != std::string::npos);
}

TEST_CASE("cli: fano summary comments in the csv") {
    const std::string out = tmp_path("fano.csv");
    auto res = run_cli("fano --preset fig7a --delta_points 8001 --out " + out);
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("fano feature") != std::string::npos);
    const std::string text = slurp(out);
    CHECK(text.find("#: fano_position = ") != std::string::npos);
    CHECK(text.find("#: fano_predicted = ") != std::string::npos);
}

TEST_CASE("cli: asym subcommand reports the exchange coupling") {
    const std::string out = tmp_path("asym.csv");
    auto res = run_cli("asym --preset fig7c --t_points 201 --out " + out);
    REQUIRE(res.exit_code == 0);
    const std::string text = slurp(out);
    CHECK(text.find("#: coupling_ab = ") != std::string::npos);
    auto csv = parse_csv(text);
    REQUIRE(csv.rows.size() == 201);
    CHECK(std::abs(csv.rows[0][4] - 0.43) < 1e-12);  // p_b(0) = G2/(G1+G2)
}
