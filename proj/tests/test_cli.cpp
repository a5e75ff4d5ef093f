#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "odekit/cli.hpp"
#include "odekit/csv.hpp"
#include "odekit/dense_output_dopri5.hpp"
#include "odekit/explicit_rk4.hpp"
#include "odekit/integrate.hpp"
#include "odekit/systems.hpp"

using Vec = std::vector<double>;
using namespace odekit;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> result;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) result.push_back(line);
  return result;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> result;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) result.push_back(f);
  return result;
}

const std::vector<std::string> lorenz_driver{"integrate", "--system", "lorenz", "--stepper",
                                        "dopri5_dense", "--t0", "0", "--t1", "1000",
                                        "--dt", "1.0", "--x0", "10,10,10"};

}  // namespace

TEST_CASE("Lorenz driver command emits 1001 rows") {
  const Run r = run(lorenz_driver);
  REQUIRE(r.code == cli::exit_ok);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 1002);
  CHECK(rows[0] == "t,x0,x1,x2");
  CHECK(rows[1] == "0,10,10,10");
  CHECK(fields(rows.back())[0] == "1000");
  CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("order on expdecay with rk4") {
  const Run r = run({"order", "--system", "expdecay", "--stepper", "rk4"});
  REQUIRE(r.code == cli::exit_ok);
  const auto rows = lines(r.out);
  CHECK(rows.front() == "dt,global_error,used");
  double slope = 0.0;
  for (const auto& row : rows) {
    const auto f = fields(row);
    if (f[0] == "slope") slope = std::stod(f[1]);
  }
  CHECK(slope >= 3.8);
  CHECK(slope <= 4.2);
}

TEST_CASE("order on the oscillator with symplectic Euler") {
  const Run r = run({"order", "--system", "harmonic", "--stepper", "symplectic_euler"});
  REQUIRE(r.code == cli::exit_ok);
  const auto last = fields(lines(r.out).back());
  REQUIRE(last[0] == "slope");
  CHECK(std::abs(std::stod(last[1]) - 1.0) <= 0.1);
  CHECK(r.out.find("underflow") == std::string::npos);
}

TEST_CASE("unknown names are usage errors listing the valid options") {
  const Run s = run({"integrate", "--system", "nosuch", "--stepper", "rk4"});
  CHECK(s.code == cli::exit_usage);
  for (const auto& name : system_names()) CHECK(s.err.find(name) != std::string::npos);

  const Run t = run({"integrate", "--system", "lorenz", "--stepper", "nosuch"});
  CHECK(t.code == cli::exit_usage);
  for (const auto& name : cli::stepper_names()) CHECK(t.err.find(name) != std::string::npos);
}

TEST_CASE("invalid flags and values are usage errors") {
  CHECK(run({}).code == cli::exit_usage);
  CHECK(run({"integrate", "--bogus"}).code == cli::exit_usage);
  CHECK(run({"integrate", "--system", "lorenz"}).code == cli::exit_usage);
  CHECK(run({"integrate", "--system", "lorenz", "--stepper", "rk4", "--dt", "abc"}).code ==
        cli::exit_usage);
  CHECK(run({"integrate", "--system", "lorenz", "--stepper", "rk4", "--dt", "-1"}).code ==
        cli::exit_usage);
  CHECK(run({"integrate", "--system", "lorenz", "--stepper", "rk4", "--x0", "1,2"}).code ==
        cli::exit_usage);
  CHECK(run({"integrate", "--system", "lorenz", "--stepper", "implicit_euler", "--t1", "0.1"})
            .code == cli::exit_ok);
  CHECK(run({"integrate", "--system", "lorenz", "--stepper", "symplectic_euler"}).code ==
        cli::exit_usage);
  CHECK(run({"order", "--system", "expdecay", "--stepper", "dopri5_dense"}).code ==
        cli::exit_usage);
  CHECK(run({"order", "--system", "lorenz", "--stepper", "rk4"}).code == cli::exit_usage);
  CHECK(run({"--help"}).code == cli::exit_ok);
}

TEST_CASE("numerical failure exits with 2") {
  // The quadratic terms overflow immediately, so the controller can never accept.
  const Run r = run({"integrate", "--system", "lorenz", "--stepper", "dopri5", "--t1", "10",
                     "--x0", "1e200,1e200,1e200"});
  CHECK(r.code == cli::exit_numerical);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("CSV output matches the library called directly") {
  const Run r = run({"integrate", "--system", "lorenz", "--stepper", "rk4", "--t1", "2",
                     "--dt", "0.01", "--x0", "1,2,3"});
  REQUIRE(r.code == cli::exit_ok);

  std::ostringstream golden;
  write_csv_header(golden, 3);
  ExplicitRk4<Vec> st;
  Vec x{1, 2, 3};
  integrate_const(st, Lorenz{}, x, 0.0, 2.0, 0.01, CsvObserver(golden));
  CHECK(r.out == golden.str());

  const Run d = run(lorenz_driver);
  std::ostringstream dense_golden;
  write_csv_header(dense_golden, 3);
  DenseOutputDopri5<Vec> dense;
  Vec y{10, 10, 10};
  integrate_const(dense, Lorenz{}, y, 0.0, 1000.0, 1.0, CsvObserver(dense_golden));
  CHECK(d.out == dense_golden.str());
}

TEST_CASE("CSV values round-trip exactly") {
  const Run r = run({"integrate", "--system", "harmonic", "--stepper", "rk4", "--t1", "1",
                     "--dt", "0.1"});
  REQUIRE(r.code == cli::exit_ok);
  ExplicitRk4<Vec> st;
  Vec x{1.0, 0.0};
  std::vector<Vec> states;
  integrate_const(st, HarmonicOscillator{}, x, 0.0, 1.0, 0.1,
                  [&](const Vec& s, double) { states.push_back(s); });
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == states.size() + 1);
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto f = fields(rows[k + 1]);
    CHECK(std::stod(f[1]) == states[k][0]);
    CHECK(std::stod(f[2]) == states[k][1]);
  }
}

TEST_CASE("repeated runs are byte-identical and --out writes the same bytes") {
  const std::vector<std::string> args{"integrate", "--system", "lorenz", "--stepper", "dopri5",
                                      "--t1", "5", "--dt", "0.05"};
  const Run a = run(args);
  const Run b = run(args);
  REQUIRE(a.code == cli::exit_ok);
  CHECK(a.out == b.out);

  const auto path = std::filesystem::temp_directory_path() / "odekit_cli_test.csv";
  auto with_out = args;
  with_out.insert(with_out.end(), {"--out", path.string()});
  const Run c = run(with_out);
  REQUIRE(c.code == cli::exit_ok);
  CHECK(c.out.empty());
  std::ifstream in(path, std::ios::binary);
  const std::string file_text((std::istreambuf_iterator<char>(in)), {});
  CHECK(file_text == a.out);
  std::filesystem::remove(path);
}

TEST_CASE("adaptive integration observes every accepted step") {
  const Run r = run({"integrate", "--system", "expdecay", "--stepper", "dopri5", "--adaptive",
                     "--t1", "1", "--dt", "0.1"});
  REQUIRE(r.code == cli::exit_ok);
  const auto rows = lines(r.out);
  CHECK(rows.size() > 2);
  CHECK(fields(rows.back())[0] == "1");
  CHECK(run({"integrate", "--system", "expdecay", "--stepper", "rk4", "--adaptive"}).code ==
        cli::exit_usage);
}

TEST_CASE("bench reports counters for each stepper") {
  const Run r = run({"bench", "--system", "harmonic", "--t1", "1", "--dt", "0.1"});
  REQUIRE(r.code == cli::exit_ok);
  const auto rows = lines(r.out);
  CHECK(rows[0] ==
        "stepper,steps_attempted,steps_accepted,steps_rejected,system_evaluations,final_time,"
        "seconds");
  // harmonic supports all seven steppers.
  REQUIRE(rows.size() == 1 + cli::stepper_names().size());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    REQUIRE(f.size() == 7);
    CHECK(std::stoul(f[1]) == std::stoul(f[2]) + std::stoul(f[3]));
    CHECK(std::stoul(f[4]) >= std::stoul(f[2]));
    CHECK(f[5] == "1");
  }
  CHECK(fields(rows[2])[0] == "rk4");
  CHECK(fields(rows[2])[4] == "40");

  const Run two = run({"bench", "--system", "lorenz", "--stepper", "rk4,dopri5", "--t1", "1"});
  REQUIRE(two.code == cli::exit_ok);
  CHECK(lines(two.out).size() == 3);
}

#ifdef ODEKIT_CLI_PATH
TEST_CASE("installed binary runs the Lorenz driver command") {
  std::string cmd = ODEKIT_CLI_PATH;
  for (const auto& a : lorenz_driver) cmd += " " + a;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string text;
  char buf[4096];
  while (const std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) text.append(buf, n);
  const int status = pclose(pipe);
  CHECK(status == 0);
  CHECK(text == run(lorenz_driver).out);

  const std::string bad = std::string(ODEKIT_CLI_PATH) + " integrate --system nosuch --stepper rk4 2>/dev/null";
  const int bad_status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(bad_status) == 1);
}
#endif
