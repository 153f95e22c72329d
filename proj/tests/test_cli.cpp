// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "specseq/cli.hpp"
#include "specseq/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int status = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "specseq");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int status = specseq::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

class Scratch {
 public:
  Scratch() : dir_(fs::temp_directory_path() / ("specseq_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

const char* kDiag = R"({"dim": 2, "re": [[0.5, 0.0], [0.0, 2.0]]})";
const char* kStable = R"({"re": [[0.5, 0.1], [0.0, 0.25]]})";
const char* kProblem = R"({"A": {"re": [[0.5, 0.0], [0.0, 2.0]]}, "F": {"kernel": "saturation", "eps": 0.01},
                           "grid": [[-0.5, 0.0], [0.0, 0.0], [0.5, 0.0]]})";

}  // namespace

TEST_CASE("spectrum and riesz") {
  Scratch s;
  const std::string a = s.write("a.json", kDiag);
  const Outcome spec = invoke({"spectrum", "--A", a});
  REQUIRE(spec.status == 0);
  const json j = json::parse(spec.out);
  CHECK(j["r"].get<double>() == doctest::Approx(2.0));
  CHECK(j["hyperbolic"].get<bool>());

  const Outcome rz = invoke({"riesz", "--A", a, "--gamma", "1"});
  REQUIRE(rz.status == 0);
  const json r = json::parse(rz.out);
  CHECK(r["rank_stable"].get<int>() == 1);
  CHECK(r["idempotence_defect"].get<double>() <= 1e-8);

  const Outcome on = invoke({"riesz", "--A", a, "--gamma", "2"});
  CHECK(on.status == static_cast<int>(specseq::ErrorCode::spectrum_on_circle));
  CHECK(json::parse(on.err)["error"] == "spectrum_on_circle");
}

TEST_CASE("resolve and transform checks") {
  Scratch s;
  const std::string a = s.write("a.json", kDiag);
  const std::string f = s.write("f.json", R"({"lo": -1, "values": [[1.0, 1.0], [0.5, 0.0]]})");
  for (const char* mode : {"split", "frequency"}) {
    const Outcome o = invoke({"resolve", "--A", a, "--f", f, "--rho", "1", "--mode", mode});
    REQUIRE(o.status == 0);
    CHECK(json::parse(o.out)["residual"].get<double>() <= 1e-8);
  }
  const Outcome causal = invoke({"resolve", "--A", a, "--f", f, "--rho", "1"});
  CHECK(causal.status == static_cast<int>(specseq::ErrorCode::not_causal_regime));

  const Outcome zt = invoke({"ztransform-check", "--u", f, "--rho", "2"});
  REQUIRE(zt.status == 0);
  const json z = json::parse(zt.out);
  CHECK(z["parseval"]["relative_defect"].get<double>() <= 1e-10);
  CHECK(z["multiplication_defect"].get<double>() <= 1e-10);
}

TEST_CASE("initial value problems and contraction solves") {
  Scratch s;
  const std::string a = s.write("a.json", kStable);
  const std::string ff = s.write("F.json", R"({"kernel": "saturation", "eps": 0.05})");
  const std::string x = s.write("x.json", "[1.0, -1.0]");
  const Outcome o = invoke({"solve-ivp", "--A", a, "--F", ff, "--x", x, "--horizon", "32"});
  REQUIRE(o.status == 0);
  const json j = json::parse(o.out);
  for (const auto& [k, v] : j["deviations"].items()) CHECK(v.get<double>() <= 1e-8);
  CHECK(j["impulse_support_nonnegative"].get<bool>());

  const std::string g = s.write("G.json", R"({"dim": 1, "terms": [{"offset": 0, "kernel": "linear", "B": {"re": [[0.5]]}}],
                                              "forcing": {"lo": -1, "values": [[1.0]]}})");
  const Outcome c = invoke({"solve-contraction", "--F", g, "--rho", "1", "--lo", "0", "--hi", "20"});
  REQUIRE(c.status == 0);
  const json cj = json::parse(c.out);
  CHECK(cj["converged"].get<bool>());
  CHECK(cj["contraction_estimate"].get<double>() <= cj["theoretical_factor"].get<double>() + 0.05);

  const Outcome bad = invoke({"solve-contraction", "--F", s.write("H.json", R"({"dim": 1, "kernel": "linear", "B": {"re": [[3.0]]}})")});
  CHECK(bad.status == static_cast<int>(specseq::ErrorCode::not_contractive));
}

TEST_CASE("stability and stable manifold") {
  Scratch s;
  const Outcome st = invoke({"stability", "--A", s.write("a.json", kStable), "--seed", "3"});
  REQUIRE(st.status == 0);
  const json j = json::parse(st.out);
  CHECK(j["verdict"] == "exponentially_stable");
  CHECK(j["consistent"].get<bool>());

  const std::string p = s.write("p.json", kProblem);
  const Outcome m = invoke({"stable-manifold", "--problem", p, "--threads", "2"});
  REQUIRE(m.status == 0);
  const json mj = json::parse(m.out);
  REQUIRE(mj["rows"].size() == 3);
  for (const auto& row : mj["rows"]) {
    CHECK(row["stable_identity_defect"].get<double>() <= 1e-8);
    CHECK(row["unstable_identity_defect"].get<double>() <= 1e-8);
  }

  const std::string csv = s.path("m.csv");
  const Outcome mc = invoke({"stable-manifold", "--problem", p, "--format", "csv", "--out", csv});
  REQUIRE(mc.status == 0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "xi0_re,xi0_im,xi1_re,xi1_im,eta0_re,eta0_im,eta1_re,eta1_im,decay_rate,iterations,residual,error");
}

TEST_CASE("repeated runs are byte-identical") {
  Scratch s;
  const std::string p = s.write("p.json", kProblem);
  const Outcome a = invoke({"stable-manifold", "--problem", p, "--threads", "1"});
  const Outcome b = invoke({"stable-manifold", "--problem", p, "--threads", "3"});
  CHECK(a.out == b.out);
  const std::string m = s.write("a.json", kDiag);
  CHECK(invoke({"stability", "--A", m, "--seed", "9"}).out == invoke({"stability", "--A", m, "--seed", "9"}).out);
}

TEST_CASE("diagnostics carry distinct codes") {
  Scratch s;
  std::set<int> codes;
  const Outcome missing = invoke({"spectrum", "--A", s.path("nope.json")});
  codes.insert(missing.status);
  CHECK(missing.status == static_cast<int>(specseq::ErrorCode::io_error));
  const json e = json::parse(missing.err);
  CHECK(e["code"].get<int>() == missing.status);
  CHECK(e.contains("message"));

  const Outcome garbled = invoke({"spectrum", "--A", s.write("bad.json", "{not json")});
  codes.insert(garbled.status);
  CHECK(garbled.status == static_cast<int>(specseq::ErrorCode::parse_error));

  const Outcome usage = invoke({"spectrum"});
  codes.insert(usage.status);
  CHECK(usage.status == static_cast<int>(specseq::ErrorCode::usage));

  const Outcome unknown = invoke({"frobnicate"});
  CHECK(unknown.status == static_cast<int>(specseq::ErrorCode::usage));

  const Outcome nonhyp = invoke({"stable-manifold", "--problem",
                                 s.write("q.json", R"({"A": {"re": [[0.5, 0.0], [0.0, 1.0]]}, "F": {"kernel": "zero"}, "grid": [[0, 0]]})")});
  codes.insert(nonhyp.status);
  CHECK(nonhyp.status == static_cast<int>(specseq::ErrorCode::indeterminate));
  CHECK(codes.size() == 4);

  const Outcome help = invoke({"--help"});
  CHECK(help.status == 0);
  CHECK(help.out.find("stable-manifold") != std::string::npos);
}
