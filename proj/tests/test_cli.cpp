#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "table.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "adlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = adlab::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    auto p = fs::temp_directory_path() / ("adlab_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("number formatting uses 17 significant digits") {
  CHECK(adlab::cli::format_double(0.1) == "0.10000000000000001");
  CHECK(adlab::cli::format_double(1.0) == "1");
  CHECK(adlab::cli::format_double(1.0 / 3.0) == "0.33333333333333331");
  CHECK(adlab::cli::format_double(-2.3e-300) == "-2.3e-300");
}

TEST_CASE("chi-scan: values, ordering and errors") {
  const auto r = run_cli({"chi-scan", "--sizes", "8,4", "--fields", "1,0.5"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"model", "N", "h", "chi_f", "chi_f_per_N"});
  CHECK(rows[1][1] == "4");
  CHECK(rows[1][2] == "0.5");
  CHECK(rows[2][2] == "1");
  CHECK(std::stod(rows[2][3]) == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(rows[3][1] == "8");

  const auto big = run_cli({"chi-scan", "--sizes", "10000", "--fields", "2"});
  REQUIRE(big.code == 0);
  CHECK(std::abs(std::stod(parse_csv(big.out)[1][4]) * 192.0 - 1.0) < 1e-6);

  CHECK(run_cli({"chi-scan", "--fields", "1"}).code == 2);
  CHECK(run_cli({"chi-scan", "--sizes", "5", "--fields", "1"}).code == 2);
  CHECK(run_cli({"chi-scan", "--sizes", "4", "--fields", "-1"}).code == 2);
  CHECK(run_cli({"chi-scan", "--sizes", "4", "--fields", "1", "--model", "kitaev"}).code == 2);
  CHECK(run_cli({"chi-scan", "--sizes", "4", "--fields", "1", "--format", "xml"}).code == 2);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("chi-scan: LMG model") {
  const auto r = run_cli({"chi-scan", "--model", "lmg", "--sizes", "16,32", "--fields", "2"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][0] == "lmg");
  CHECK(std::stod(rows[1][3]) > 0.0);
  // Below h = 1 the parity doublet is degenerate at this size: numerical failure.
  CHECK(run_cli({"chi-scan", "--model", "lmg", "--sizes", "64", "--fields", "0.5"}).code == 3);
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
  const auto dir = scratch_dir();
  for (const std::string fmt : {"csv", "json"}) {
    const auto a = dir / ("a." + fmt);
    const auto b = dir / ("b." + fmt);
    REQUIRE(run_cli({"chi-scan", "--model", "lmg", "--sizes", "8,16,32", "--fields", "1,1.5,2", "--gamma", "0.3",
                     "--format", fmt, "--output", a.string(), "--threads", "1"})
                .code == 0);
    REQUIRE(run_cli({"chi-scan", "--model", "lmg", "--sizes", "32,16,8", "--fields", "2,1.5,1", "--gamma", "0.3",
                     "--format", fmt, "--output", b.string(), "--threads", "3"})
                .code == 0);
    const auto ta = slurp(a);
    const auto tb = slurp(b);
    CHECK(!ta.empty());
    // meta echoes the requested order, rows must match exactly
    if (fmt == "csv") {
      CHECK(ta == tb);
    } else {
      const auto ja = nlohmann::json::parse(ta);
      const auto jb = nlohmann::json::parse(tb);
      CHECK(ja["rows"] == jb["rows"]);
      CHECK(ja.contains("meta"));
      CHECK(ja["rows"].size() == 9);
    }
  }
  const auto c = dir / "c.csv";
  const auto d = dir / "d.csv";
  REQUIRE(run_cli({"chi-scan", "--sizes", "4,6,8", "--fields", "0.5,1", "--output", c.string()}).code == 0);
  REQUIRE(run_cli({"chi-scan", "--sizes", "4,6,8", "--fields", "0.5,1", "--output", d.string()}).code == 0);
  CHECK(slurp(c) == slurp(d));
}

TEST_CASE("summary goes to stdout when data goes to a file") {
  const auto path = scratch_dir() / "summary.csv";
  const auto r = run_cli({"chi-scan", "--sizes", "4", "--fields", "1", "--output", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("chi-scan: model=ising rows=1") != std::string::npos);
  CHECK(slurp(path).rfind("model,N,h", 0) == 0);
}

TEST_CASE("config file with flag overrides") {
  const auto cfg = scratch_dir() / "run.cfg";
  std::ofstream(cfg) << "sizes=4,6\nfields=1\nformat=json\n";
  const auto from_file = run_cli({"chi-scan", "--config", cfg.string()});
  REQUIRE(from_file.code == 0);
  const auto j = nlohmann::json::parse(from_file.out);
  CHECK(j["rows"].size() == 2);

  const auto overridden = run_cli({"chi-scan", "--config", cfg.string(), "--sizes", "8", "--format", "csv"});
  REQUIRE(overridden.code == 0);
  const auto rows = parse_csv(overridden.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][1] == "8");
}

TEST_CASE("gnuplot column file") {
  const auto plot = scratch_dir() / "chi.dat";
  REQUIRE(run_cli({"chi-scan", "--sizes", "4,6", "--fields", "0.5,1", "--plot", plot.string()}).code == 0);
  const auto text = slurp(plot);
  CHECK(text.rfind("# N chi_f h\n", 0) == 0);
  CHECK(text.find("\n\n\n") != std::string::npos);  // blank lines between field blocks
}

TEST_CASE("ed-verify") {
  const auto ok = run_cli({"ed-verify"});
  CHECK(ok.code == 0);
  CHECK(ok.err.find("PASS") != std::string::npos);
  CHECK(parse_csv(ok.out).size() == 25);

  const auto fault = run_cli({"ed-verify", "--sizes", "4", "--inject-fault"});
  CHECK(fault.code == 4);
  CHECK(fault.err.find("FAIL") != std::string::npos);

  const auto capped = run_cli({"ed-verify", "--sizes", "4,12", "--fields", "1"});
  CHECK(capped.code == 0);
  CHECK(capped.err.find("SizeCap") != std::string::npos);
  CHECK(parse_csv(capped.out).size() == 2);

  CHECK(run_cli({"ed-verify", "--model", "lmg"}).code == 2);
  CHECK(run_cli({"ed-verify", "--sizes", "12"}).code == 2);
}

TEST_CASE("quench: tau0 grid and tau0* search") {
  const auto dir = scratch_dir();
  const auto out = dir / "quench.csv";
  const auto r = run_cli({"quench", "--sizes", "32,64,128", "--fields", "3,0", "--target-f", "0.9", "--tau0", "1",
                          "--output", out.string()});
  REQUIRE(r.code == 0);
  const auto tau = parse_csv(slurp(dir / "quench_tau_star.csv"));
  REQUIRE(tau.size() == 4);
  CHECK(tau[0] == std::vector<std::string>{"N", "tau0_star"});
  CHECK(std::stod(tau[1][1]) < std::stod(tau[2][1]));
  CHECK(std::stod(tau[2][1]) < std::stod(tau[3][1]));
  CHECK(parse_csv(slurp(out)).size() == 4);
  CHECK(r.out.find("tau0_star=") != std::string::npos);
}

TEST_CASE("quench: adiabatic limit") {
  const auto r = run_cli({"quench", "--sizes", "32", "--fields", "3,0", "--tau0", "10000"});
  REQUIRE(r.code == 0);
  CHECK(std::stod(parse_csv(r.out)[1][2]) > 0.999);
}

TEST_CASE("quench: fit appended for four sizes, both paths, errors") {
  const auto r = run_cli({"quench", "--sizes", "16,24,32,48", "--fields", "3,0", "--target-f", "0.9", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.contains("tau_star_fit"));
  CHECK(std::abs(j["tau_star_fit"]["d_a"].get<double>() - 2.0) < 0.3);

  const auto ed_run = run_cli({"quench", "--sizes", "4,6", "--fields", "3,0.5", "--tau0", "1"});
  REQUIRE(ed_run.code == 0);
  const auto ff_run = run_cli({"quench", "--sizes", "4,6", "--fields", "3,0.5", "--tau0", "1", "--path", "ff"});
  REQUIRE(ff_run.code == 0);
  const auto a = parse_csv(ed_run.out);
  const auto b = parse_csv(ff_run.out);
  CHECK(a[1][3] == "ed");
  CHECK(b[1][3] == "ff");
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(std::abs(std::stod(a[i][2]) - std::stod(b[i][2])) < 1e-4);

  CHECK(run_cli({"quench", "--sizes", "32", "--fields", "3,0"}).code == 2);
  CHECK(run_cli({"quench", "--sizes", "32", "--fields", "3", "--tau0", "1"}).code == 2);
  CHECK(run_cli({"quench", "--sizes", "32", "--fields", "3,0", "--target-f", "1.5"}).code == 2);
  CHECK(run_cli({"quench", "--sizes", "32", "--fields", "3,0", "--target-f", "0.99", "--tau-max", "2"}).code == 3);
}

TEST_CASE("scaling-fit") {
  const auto dir = scratch_dir();
  const auto power = dir / "power.csv";
  {
    std::ofstream f(power);
    f << "L,value\n";
    for (int l : {4, 8, 16, 32, 64}) f << l << ',' << adlab::cli::format_double(2.0 * std::pow(l, 1.5)) << '\n';
  }
  const auto r = run_cli({"scaling-fit", power.string(), "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["rows"][0]["d_a"].get<double>() == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(j["rows"][0]["kappa"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));

  const auto chi = dir / "chi.csv";
  REQUIRE(run_cli({"chi-scan", "--sizes", "64,128,256,512,1024,2048,4096", "--fields", "1", "--output", chi.string()})
              .code == 0);
  const auto fit = run_cli({"scaling-fit", "--input", chi.string()});
  REQUIRE(fit.code == 0);
  CHECK(std::abs(std::stod(parse_csv(fit.out)[1][0]) - 2.0) < 0.01);

  const auto multi = dir / "multi.csv";
  REQUIRE(run_cli({"chi-scan", "--sizes", "64,128,256,512", "--fields", "1,2", "--output", multi.string()}).code == 0);
  CHECK(run_cli({"scaling-fit", multi.string()}).code == 2);
  const auto gapped = run_cli({"scaling-fit", multi.string(), "--fields", "2"});
  REQUIRE(gapped.code == 0);
  CHECK(std::abs(std::stod(parse_csv(gapped.out)[1][0]) - 1.0) < 0.02);

  const auto zero = dir / "zero.csv";
  std::ofstream(zero) << "L,value\n4,1\n8,0\n16,3\n32,4\n";
  CHECK(run_cli({"scaling-fit", zero.string()}).code == 2);

  const auto bad = dir / "bad.csv";
  std::ofstream(bad) << "L,value\n4,1\n8,abc\n16,3\n32,4\n";
  CHECK(run_cli({"scaling-fit", bad.string()}).code == 2);

  const auto headerless = dir / "plain.csv";
  std::ofstream(headerless) << "# comment\n4,2\n8,4\n16,8\n32,16\n";
  const auto plain = run_cli({"scaling-fit", headerless.string()});
  REQUIRE(plain.code == 0);
  CHECK(std::stod(parse_csv(plain.out)[1][0]) == doctest::Approx(1.0));

  CHECK(run_cli({"scaling-fit", (dir / "missing.csv").string()}).code == 2);
}

}  // TEST_SUITE
