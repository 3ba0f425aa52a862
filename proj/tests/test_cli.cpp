#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "frkit/approx.hpp"
#include "frkit/series_io.hpp"
#include "frkit/signal.hpp"
#include "oracles.hpp"

// End-to-end checks against the built binary (path in FRKIT_CLI). Each run
// redirects stdout/stderr to files so reports can be parsed back.

namespace {

namespace fs = std::filesystem;

std::string cli_path() {
    const char* p = std::getenv("FRKIT_CLI");
    REQUIRE_MESSAGE(p != nullptr, "FRKIT_CLI must point at the frkit binary");
    return p;
}

std::string fixture(const std::string& name) {
    const char* p = std::getenv("FRKIT_FIXTURES");
    REQUIRE_MESSAGE(p != nullptr, "FRKIT_FIXTURES must point at tests/fixtures");
    return (fs::path(p) / name).string();
}

fs::path work_dir() {
    const auto dir = fs::temp_directory_path() / "frkit_cli_tests";
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args, const std::string& stdout_file,
            const std::string& stderr_file = "/dev/null") {
    const std::string cmd =
        cli_path() + " " + args + " > " + stdout_file + " 2> " + stderr_file;
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json run_json(const std::string& args, int expect_code = 0) {
    const auto out = (work_dir() / "stdout.json").string();
    const int code = run_cli(args, out);
    REQUIRE(code == expect_code);
    return nlohmann::json::parse(slurp(out));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("series parsing") {
    const auto dir = work_dir();
    // header auto-detection, column by name, imaginary column, missing tokens
    const auto path = (dir / "parse.csv").string();
    {
        std::ofstream o(path);
        o << "index,temp,anomaly\n";
        o << "0,1.5,0.25\n";
        o << "1,NaN,0.5\n";
        o << "2,-2.25,\n";
        o << "3,4.0,1.0\n";
    }
    frkit::SeriesOptions opts;
    opts.column = "temp";
    opts.imag_column = "anomaly";
    const auto parsed = frkit::read_series(path, opts);
    REQUIRE(parsed.values.size() == 4);
    CHECK(parsed.values[0] == frkit::cplx{1.5, 0.25});
    CHECK_FALSE(parsed.observed[1]);  // NaN real part
    CHECK_FALSE(parsed.observed[2]);  // empty imaginary part
    CHECK(parsed.missing_count == 2);
    CHECK(parsed.values[3] == frkit::cplx{4.0, 1.0});

    // numeric column selector, no header
    const auto bare = (dir / "bare.csv").string();
    {
        std::ofstream o(bare);
        o << "7,1\n8,2\n9,3\n";
    }
    frkit::SeriesOptions by_index;
    by_index.column = "1";
    const auto col = frkit::read_series(bare, by_index);
    REQUIRE(col.values.size() == 3);
    CHECK(col.values[2].real() == doctest::Approx(3.0));

    // indexed format accepts shuffled rows and rejects duplicates
    const auto indexed = (dir / "indexed.csv").string();
    {
        std::ofstream o(indexed);
        o << "index,value_re,value_im,observed\n";
        o << "2,3.0,0.5,1\n0,1.0,0,1\n1,,,0\n";
    }
    const auto ix = frkit::read_indexed_series(indexed);
    REQUIRE(ix.values.size() == 3);
    CHECK(ix.values[0] == frkit::cplx{1.0, 0.0});
    CHECK_FALSE(ix.observed[1]);
    CHECK(ix.values[2] == frkit::cplx{3.0, 0.5});
    {
        std::ofstream o(indexed);
        o << "index,value_re,value_im,observed\n0,1,0,1\n0,2,0,1\n";
    }
    CHECK_THROWS_AS(frkit::read_indexed_series(indexed), frkit::InputError);
}

TEST_CASE("detrending") {
    // linear detrend removes an exact affine ramp
    std::vector<frkit::cplx> ramp(50);
    for (std::size_t x = 0; x < 50; ++x)
        ramp[x] = frkit::cplx{2.0 + 0.5 * static_cast<double>(x), -1.0};
    const auto flat = frkit::detrend_signal(frkit::Signal(ramp), frkit::Detrend::Linear);
    for (std::size_t x = 0; x < 50; ++x) REQUIRE(std::abs(flat[x]) < 1e-10);

    const auto centered = frkit::detrend_signal(frkit::Signal(ramp), frkit::Detrend::Mean);
    frkit::cplx sum{0.0, 0.0};
    for (const auto& z : centered.values()) sum += z;
    CHECK(std::abs(sum) < 1e-10);
}

TEST_CASE("analyze reports FR = 1 for a constant series") {
    const auto j = run_json("--no-timestamp analyze " + fixture("constant_100.csv"));
    CHECK(j["result"]["fr"].get<double>() == doctest::Approx(1.0));
    CHECK(j["result"]["domain_size"].get<int>() == 100);
    CHECK(j["version"] == "0.1.0");
    CHECK(j["seed"] == 1);
}

TEST_CASE("analyze reproduces the subgroup Fourier ratio") {
    const auto j = run_json("--no-timestamp analyze " + fixture("subgroup_15.csv"));
    CHECK(j["result"]["fr"].get<double>() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-8));
    CHECK(j["result"]["fr_hat"].get<double>() == doctest::Approx(std::sqrt(5.0)).epsilon(1e-8));
}

TEST_CASE("reports are byte-identical under a fixed seed") {
    const auto a = (work_dir() / "a.json").string();
    const auto b = (work_dir() / "b.json").string();
    REQUIRE(run_cli("--seed 9 --no-timestamp analyze " + fixture("subgroup_15.csv"), a) == 0);
    REQUIRE(run_cli("--seed 9 --no-timestamp analyze " + fixture("subgroup_15.csv"), b) == 0);
    CHECK(slurp(a) == slurp(b));

    const auto dir = work_dir().string();
    const auto c1 = (work_dir() / "c1.json").string();
    const auto c2 = (work_dir() / "c2.json").string();
    REQUIRE(run_cli("--seed 4 --no-timestamp --outdir " + dir +
                        " constants --n-grid 128 --q-grid 4 --trials 100 --prefix det",
                    c1) == 0);
    const auto heat1 = slurp(dir + "/det_ct.csv");
    REQUIRE(run_cli("--seed 4 --no-timestamp --outdir " + dir +
                        " constants --n-grid 128 --q-grid 4 --trials 100 --prefix det",
                    c2) == 0);
    CHECK(slurp(c1) == slurp(c2));
    CHECK(slurp(dir + "/det_ct.csv") == heat1);
}

TEST_CASE("csv report format") {
    const auto out = (work_dir() / "rep.csv").string();
    REQUIRE(run_cli("--no-timestamp --format csv analyze " + fixture("constant_100.csv"), out) ==
            0);
    const auto text = slurp(out);
    CHECK(text.rfind("key,value\n", 0) == 0);
    CHECK(text.find("result.fr,1\n") != std::string::npos);
}

TEST_CASE("approx l2 end to end on the subgroup fixture") {
    const auto dir = work_dir().string();
    const auto j = run_json("--seed 3 --no-timestamp --outdir " + dir + " approx " +
                            fixture("subgroup_15.csv") + " --mode l2 --eta 0.9");
    CHECK(j["result"]["degree"].get<int>() == 3);  // floor(2/0.81) + 1
    CHECK(j["result"]["success"].get<bool>());
    const double target = j["result"]["target_error"].get<double>();
    CHECK(j["result"]["achieved_error"].get<double>() < target);

    // residual column of the reconstruction CSV matches the report
    std::ifstream recon(j["result"]["reconstruction_csv"].get<std::string>());
    REQUIRE(recon.good());
    std::string line;
    std::getline(recon, line);
    CHECK(line == "index,original_re,original_im,recon_re,recon_im,residual_abs");
    double resid_sq = 0.0;
    while (std::getline(recon, line)) {
        const auto pos = line.rfind(',');
        resid_sq += std::pow(std::strtod(line.c_str() + pos + 1, nullptr), 2);
    }
    CHECK(std::sqrt(resid_sq) < target);
}

TEST_CASE("reported degree matches the library formula per mode") {
    const auto parsed = frkit::read_series(fixture("subgroup_15.csv"), {});
    const frkit::Signal f(parsed.values);
    const auto dir = work_dir().string();
    const auto j2 = run_json("--seed 1 --no-timestamp --outdir " + dir + " approx " +
                             fixture("subgroup_15.csv") + " --mode l2 --eta 0.9");
    CHECK(j2["result"]["degree"].get<std::size_t>() == frkit::l2_degree(f, 0.9));
    const auto j1 = run_json("--seed 1 --no-timestamp --outdir " + dir + " approx " +
                             fixture("subgroup_15.csv") + " --mode l1 --eta 0.8");
    CHECK(j1["result"]["degree"].get<std::size_t>() == frkit::l1_degree(f, 0.8));
}

TEST_CASE("truncate mode with a threshold above the flat spectrum") {
    // the delta has flat |f_hat|, so eta > 1 empties the large spectrum and
    // the residual equals the input norm
    const auto delta_csv = (work_dir() / "delta.csv").string();
    std::ofstream out(delta_csv);
    out << "value\n1\n";
    for (int i = 1; i < 32; ++i) out << "0\n";
    out.close();
    const auto dir = work_dir().string();
    const auto j = run_json("--no-timestamp --outdir " + dir + " approx " + delta_csv +
                            " --mode truncate --eta 1.5");
    CHECK(j["result"]["degree"].get<int>() == 0);
    CHECK(j["result"]["achieved_error"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("impute with no gaps returns the input unchanged") {
    const auto dir = work_dir().string();
    const auto imputed = (work_dir() / "full.csv").string();
    const auto j = run_json("--no-timestamp --outdir " + dir + " impute " +
                            fixture("subgroup_15.csv") + " -o " + imputed);
    CHECK(j["result"]["converged"].get<bool>());
    std::ifstream in(imputed);
    std::string line;
    std::getline(in, line);
    CHECK(line == "index,imputed_re,imputed_im,was_observed");
    int row = 0;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string idx, re, im, obs;
        std::getline(ss, idx, ',');
        std::getline(ss, re, ',');
        std::getline(ss, im, ',');
        std::getline(ss, obs, ',');
        CHECK(std::strtod(re.c_str(), nullptr) ==
              doctest::Approx(row % 3 == 0 ? 1.0 : 0.0).epsilon(1e-9));
        CHECK(obs == "1");
        ++row;
    }
    CHECK(row == 15);
}

TEST_CASE("impute recovers a gapped sparse-spectrum series") {
    // build the fixture: 5-sparse spectrum on Z_256, half the samples dropped
    const std::size_t n = 256;
    frkit::Rng rng(616);
    frkit::Spectrum F = frkit::Spectrum::zeros(n);
    for (int placed = 0; placed < 5;) {
        const auto m = rng.uniform_index(n);
        if (F[m] == frkit::cplx{0.0, 0.0}) {
            F[m] = 1.0;
            ++placed;
        }
    }
    const frkit::Signal truth = frkit::idft(F);
    const auto gapped = (work_dir() / "gapped.csv").string();
    {
        std::ofstream out(gapped);
        out << "index,value_re,value_im,observed\n";
        for (std::size_t x = 0; x < n; ++x) {
            if (rng.uniform() < 0.5) {
                char buf[96];
                std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,1\n", x, truth[x].real(),
                              truth[x].imag());
                out << buf;
            } else {
                out << x << ",,,0\n";
            }
        }
    }
    const auto dir = work_dir().string();
    const auto imputed = (work_dir() / "gapped_imputed.csv").string();
    const auto j = run_json("--no-timestamp --outdir " + dir + " impute " + gapped + " -o " +
                            imputed);
    REQUIRE(j["result"]["converged"].get<bool>());
    CHECK(j["result"]["certified_error_bound_abs"].get<double>() == doctest::Approx(0.0));

    std::ifstream in(imputed);
    std::string line;
    std::getline(in, line);
    double num = 0.0, den = 0.0;
    std::size_t x = 0;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string idx, re, im, obs;
        std::getline(ss, idx, ',');
        std::getline(ss, re, ',');
        std::getline(ss, im, ',');
        const frkit::cplx got(std::strtod(re.c_str(), nullptr), std::strtod(im.c_str(), nullptr));
        num += std::norm(got - truth[x]);
        den += std::norm(truth[x]);
        ++x;
    }
    REQUIRE(x == n);
    CHECK(std::sqrt(num / den) <= 1e-4);
}

TEST_CASE("impute q-sweep emits the phase-transition CSV") {
    const std::size_t n = 128;
    frkit::Rng rng(4141);
    frkit::Spectrum F = frkit::Spectrum::zeros(n);
    for (int placed = 0; placed < 5;) {
        const auto m = rng.uniform_index(n);
        if (F[m] == frkit::cplx{0.0, 0.0}) {
            F[m] = 1.0;
            ++placed;
        }
    }
    const frkit::Signal truth = frkit::idft(F);
    const auto full = (work_dir() / "full.csv").string();
    {
        std::ofstream out(full);
        out << "index,value_re,value_im,observed\n";
        for (std::size_t x = 0; x < n; ++x) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,1\n", x, truth[x].real(),
                          truth[x].imag());
            out << buf;
        }
    }
    const auto dir = work_dir().string();
    const auto j = run_json("--seed 2 --no-timestamp --outdir " + dir + " impute " + full +
                            " --sweep-q 15,60 --trials 5");
    REQUIRE(j["result"]["rows"].size() == 2);
    // deep undersampling fails, generous sampling recovers
    CHECK(j["result"]["rows"][0]["recovered_rate"].get<double>() < 1.0);
    CHECK(j["result"]["rows"][1]["recovered_rate"].get<double>() == doctest::Approx(1.0));
    const auto csv = slurp(j["result"]["sweep_csv"].get<std::string>());
    CHECK(csv.rfind("q,mean_mask_size,recovered_rate,mean_rel_error,median_rel_error\n", 0) ==
          0);
}

TEST_CASE("noise subcommand smoke runs") {
    auto j = run_json("--seed 2 --no-timestamp noise --experiment perturbation --trials 50");
    CHECK(j["result"]["violations"].get<int>() == 0);

    j = run_json("--seed 2 --no-timestamp noise --experiment gauss --n 64 --sigma 0.01 "
                 "--trials 200");
    CHECK(j["result"]["pass"].get<bool>());
    CHECK(j["result"].contains("quantiles"));
    CHECK(j["result"]["violations"].is_number());

    j = run_json("--seed 2 --no-timestamp noise --experiment average --n 64 --sigma 1 "
                 "--trials 100 --copies 8");
    CHECK(j["result"]["mse_within_3se"].get<bool>());
}

TEST_CASE("a single constants cell finishes within its runtime budget") {
    const auto dir = work_dir().string();
    const auto out = (work_dir() / "cell.json").string();
    const auto t0 = std::chrono::steady_clock::now();
    REQUIRE(run_cli("--seed 8 --no-timestamp --outdir " + dir +
                        " constants --n-grid 1000 --q 4 --trials 1000 --prefix cell",
                    out) == 0);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 60.0);
    const auto j = nlohmann::json::parse(slurp(out));
    const double ct = j["result"]["ct_estimates"][0][0].get<double>();
    CHECK(ct >= 1.0 - 1e-9);
}

TEST_CASE("exit codes") {
    const auto out = (work_dir() / "err.txt").string();
    const auto err = (work_dir() / "err2.txt").string();
    // missing file -> input error
    CHECK(run_cli("--no-timestamp analyze /nonexistent/nope.csv", out, err) == 2);
    // malformed row -> input error naming the row
    const auto bad = (work_dir() / "bad.csv").string();
    {
        std::ofstream o(bad);
        o << "value\n1.0\noops\n2.0\n";
    }
    CHECK(run_cli("--no-timestamp analyze " + bad, out, err) == 2);
    CHECK(slurp(err).find("row 3") != std::string::npos);
    // missing required option -> usage
    CHECK(run_cli("--no-timestamp approx " + fixture("constant_100.csv"), out, err) == 1);
    // bad parameter value -> usage
    CHECK(run_cli("--no-timestamp approx " + fixture("constant_100.csv") +
                      " --mode l2 --eta 1.5",
                  out, err) == 1);
    // all-missing impute -> input error
    const auto empty = (work_dir() / "empty.csv").string();
    {
        std::ofstream o(empty);
        o << "index,value_re,value_im,observed\n0,,,0\n1,,,0\n";
    }
    CHECK(run_cli("--no-timestamp impute " + empty, out, err) == 2);
    // zero series has no Fourier ratio -> input error
    const auto zeros = (work_dir() / "zeros.csv").string();
    {
        std::ofstream o(zeros);
        o << "value\n0\n0\n0\n0\n";
    }
    CHECK(run_cli("--no-timestamp analyze " + zeros, out, err) == 2);
    // --help succeeds
    CHECK(run_cli("--help", out, err) == 0);
}

}  // TEST_SUITE
