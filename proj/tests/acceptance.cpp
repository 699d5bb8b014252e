// Acceptance run: every criterion prints one PASS/FAIL line. Commands go
// through the same entry point as the `lrp` tool, and criterion 11 reruns all
// of them and compares outputs byte for byte.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lrp/cli.hpp"
#include "lrp/io.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

struct Command {
  std::vector<std::string> args;
  std::vector<std::string> outputs;
  int code = -1;
  double seconds = 0.0;
  std::map<std::string, std::string> snapshot;
};

std::string normalized_manifest(const std::string& path) {
  ojson m = ojson::parse(lrp::read_file(path));
  m.erase("wall_time_s");
  return m.dump();
}

class Runner {
 public:
  explicit Runner(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  Command& run(std::vector<std::string> args, std::vector<std::string> extra_outputs = {}) {
    Command c;
    c.args = std::move(args);
    const auto it = std::find(c.args.begin(), c.args.end(), "--out");
    const std::string out = *(it + 1);
    c.outputs = {out, out + ".manifest.json"};
    for (auto& e : extra_outputs) c.outputs.push_back(e);
    execute(c);
    for (const std::string& o : c.outputs)
      if (fs::exists(o)) c.snapshot[o] = snapshot_of(o);
    commands_.push_back(std::move(c));
    return commands_.back();
  }

  // Reruns every command; returns the files whose bytes changed.
  std::vector<std::string> rerun_all() {
    std::vector<std::string> changed;
    for (Command& c : commands_) {
      Command again = c;
      execute(again);
      if (again.code != c.code) changed.push_back(c.args[1] + " (exit code)");
      for (const auto& [file, bytes] : c.snapshot)
        if (!fs::exists(file) || snapshot_of(file) != bytes) changed.push_back(file);
    }
    return changed;
  }

  std::size_t command_count() const { return commands_.size(); }
  std::size_t file_count() const {
    std::size_t n = 0;
    for (const Command& c : commands_) n += c.snapshot.size();
    return n;
  }

 private:
  static std::string snapshot_of(const std::string& file) {
    if (file.size() > 14 && file.ends_with(".manifest.json")) return normalized_manifest(file);
    return lrp::read_file(file);
  }

  static void execute(Command& c) {
    const auto t0 = std::chrono::steady_clock::now();
    c.code = lrp::run_cli(c.args);
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  fs::path dir_;
  std::deque<Command> commands_;
};

struct Verdict {
  bool pass = false;
  std::string note;
};

int failures = 0;

void report(int id, const std::string& title, const Verdict& v, double seconds) {
  std::printf("criterion %2d: %s  %-34s %8.1fs  %s\n", id, v.pass ? "PASS" : "FAIL", title.c_str(),
              seconds, v.note.c_str());
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

ojson load(const std::string& file) { return ojson::parse(lrp::read_file(file)); }

const ojson* find_check(const ojson& rep, const std::string& name) {
  for (const ojson& c : rep["checks"])
    if (c["name"] == name) return &c;
  return nullptr;
}

// All named checks must pass; an empty list means every check of the suite.
Verdict checks_pass(const ojson& rep, const std::vector<std::string>& names) {
  Verdict v{true, ""};
  std::vector<std::string> want = names;
  if (want.empty())
    for (const ojson& c : rep["checks"]) want.push_back(c["name"]);
  for (const std::string& n : want) {
    const ojson* c = find_check(rep, n);
    if (!c || !(*c)["pass"].get<bool>()) {
      v.pass = false;
      v.note += n + " failed; ";
    }
  }
  return v;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance run for the lrp toolkit"};
  std::string workdir = (fs::temp_directory_path() / "lrp_acceptance").string();
  double scale = 1.0;
  std::uint64_t seed = 1;
  app.add_option("--workdir", workdir, "directory for outputs");
  app.add_option("--scale", scale, "fraction of the full replicate counts (1 for the real run)");
  app.add_option("--seed", seed, "master seed");
  CLI11_PARSE(app, argc, argv);

  Runner runner(workdir);
  const std::string seed_s = std::to_string(seed);
  const std::string scale_s = lrp::format_double(scale);
  auto suite = [&](const std::string& name) -> const Command& {
    Command& c = runner.run({"lrp", "verify", "--quiet", "--suite", name, "--seed", seed_s, "--scale", scale_s,
                             "--out", runner.path("suite_" + name + ".json")});
    return c;
  };
  auto suite_verdict = [&](const Command& c, const std::vector<std::string>& names, double budget) {
    if (c.code != lrp::kExitOk && c.code != lrp::kExitVerifyFailed)
      return Verdict{false, "exit code " + std::to_string(c.code)};
    Verdict v = checks_pass(load(c.outputs.front()), names);
    if (c.seconds > budget) {
      v.pass = false;
      v.note += "over the " + fmt("%.0f", budget) + "s budget; ";
    }
    return v;
  };

  {
    const Command& c = suite("oracle");
    Verdict v = suite_verdict(c, {}, 60);
    const ojson rep = load(c.outputs.front());
    v.note += "max error " + fmt("%.2g", (*find_check(rep, "bucketed_matches_brute_force"))["detail"]["max_abs_error"].get<double>());
    report(1, "oracle equivalence", v, c.seconds);
  }
  {
    const Command& c = suite("axioms");
    Verdict v = suite_verdict(c, {"symmetry", "triangle_inequality", "euclidean_upper_bound"}, 1e9);
    report(2, "metric axioms", v, c.seconds);
  }
  {
    const Command& c = suite("sampler");
    Verdict v = suite_verdict(c, {"discrete_edge_frequency", "continuous_edge_count"}, 120);
    const ojson rep = load(c.outputs.front());
    v.note += "z = " + fmt("%.2f", (*find_check(rep, "discrete_edge_frequency"))["detail"]["z"].get<double>()) +
              ", " + fmt("%.2f", (*find_check(rep, "continuous_edge_count"))["detail"]["z"].get<double>());
    report(3, "sampler fidelity", v, c.seconds);
  }
  {
    const Command& c = suite("coupling");
    Verdict v = suite_verdict(c, {"coupling_inequalities_d1", "coupling_inequalities_d2"}, 300);
    report(4, "coupling inequalities", v, c.seconds);
  }
  {
    const Command& c = suite("fidelity");
    Verdict v = suite_verdict(c, {}, 300);
    v.note += "p = " + fmt("%.3g", load(c.outputs.front())["checks"][0]["detail"]["p_value"].get<double>());
    report(5, "coarse-grain fidelity", v, c.seconds);
  }
  {
    const Command& a = suite("paths");
    const Command& b = suite("hops");
    Verdict v = suite_verdict(a, {}, 1e9);
    const Verdict w = suite_verdict(b, {}, 1e9);
    v.pass = v.pass && w.pass;
    v.note += w.note;
    if (a.seconds + b.seconds > 600) {
      v.pass = false;
      v.note += "over the 600s budget";
    }
    report(6, "path and hop counts", v, a.seconds + b.seconds);
  }
  {
    const Command& c = suite("scaling");
    Verdict v = suite_verdict(c, {}, 600);
    const ojson rep = load(c.outputs.front());
    v.note += "p = " + fmt("%.3g", rep["checks"][0]["detail"]["p_value"].get<double>()) +
              ", wrong exponent p = " + fmt("%.3g", rep["checks"][1]["detail"]["p_value"].get<double>());
    report(7, "scaling invariance", v, c.seconds);
  }
  {
    const Command& c = suite("theta");
    Verdict v = suite_verdict(c, {}, 1800);
    const ojson rep = load(c.outputs.front());
    const ojson& est = (*find_check(rep, "theta_decreasing_in_beta"))["detail"]["estimates"];
    for (const ojson& e : est)
      v.note += "theta(" + fmt("%g", e["beta"].get<double>()) + ") = " +
                fmt("%.3f", e["theta_hat"].get<double>()) + " [" + fmt("%.3f", e["ci_low"].get<double>()) +
                ", " + fmt("%.3f", e["ci_high"].get<double>()) + "] ";
    report(8, "exponent behavior", v, c.seconds);
  }
  {
    const Command& c = suite("tails");
    Verdict v = suite_verdict(c, {"mgf_stability"}, 900);
    v.note += "ratio " + fmt("%.3f", (*find_check(load(c.outputs.front()), "mgf_stability"))["detail"]["stability_ratio"].get<double>());
    report(9, "tail stability", v, c.seconds);
  }
  // Remaining suites run for reproducibility coverage.
  suite("medians");

  {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v{true, ""};
    const std::vector<std::string> betas = {"0.01", "0.1", "0.5", "1", "2", "5"};
    for (const std::string& b : betas) {
      const std::string out = runner.path("fig1_ball_beta" + b + ".f32");
      const Command& c = runner.run({"lrp", "ball", "--model", "discrete", "--d", "2", "--box=-500:499",
                                     "--beta", b, "--seed", seed_s, "--source", "0,0", "--out", out},
                                    {out + ".json"});
      if (c.code != 0 || fs::file_size(out) != 4u * 1000u * 1000u) {
        v.pass = false;
        v.note += "ball " + b + " failed; ";
      }
    }
    for (const std::string& b : betas) {
      const std::string out = runner.path("fig3_geodesic_beta" + b + ".csv");
      const Command& c = runner.run({"lrp", "geodesic", "--model", "discrete", "--d", "1",
                                     "--box=-100000:100000", "--beta", b, "--seed", seed_s, "--from", "0",
                                     "--to", "100000", "--out", out});
      bool ok = c.code == 0;
      if (ok) {
        std::istringstream in(lrp::read_file(out));
        std::string line, last;
        std::getline(in, line);
        std::getline(in, line);
        ok = line == "0,0,0,0";
        while (std::getline(in, line)) last = line;
        ok = ok && last.find(",100000,") != std::string::npos;
      }
      if (!ok) {
        v.pass = false;
        v.note += "geodesic " + b + " failed; ";
      }
    }
    const std::string diam = runner.path("fig4_diameter.csv");
    const Command& c = runner.run({"lrp", "diam", "--d", "1", "--box=-100000:100000", "--beta",
                                   "0.01,0.1,0.5,1,2,5", "--seed", seed_s, "--n-schedule",
                                   "1,2,4,8,16,32,64,128,256,512,1024", "--out", diam});
    if (c.code != 0) {
      v.pass = false;
      v.note += "diam failed; ";
    } else {
      const ojson curves = load(diam + ".manifest.json")["extra"]["curves"];
      std::int64_t order = 0, growth = 0;
      for (std::size_t b = 0; b < curves.size(); ++b) {
        const auto cur = curves[b]["diam"].get<std::vector<std::int64_t>>();
        for (std::size_t i = 1; i < cur.size(); ++i) growth += cur[i] < cur[i - 1];
        if (b > 0) {
          const auto prev = curves[b - 1]["diam"].get<std::vector<std::int64_t>>();
          for (std::size_t i = 0; i < cur.size(); ++i) order += cur[i] > prev[i];
        }
      }
      if (order || growth) {
        v.pass = false;
        v.note += "diameter curves not monotone; ";
      }
      v.note += "diam(1024) for beta 0.01..5:";
      for (const ojson& cv : curves) v.note += " " + std::to_string(cv["diam"].back().get<std::int64_t>());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > 1200) {
      v.pass = false;
      v.note += "; over the 1200s budget";
    }
    report(10, "figure reproduction", v, secs);
  }

  {
    const auto t0 = std::chrono::steady_clock::now();
    runner.run({"lrp", "sample", "--model", "continuous", "--d", "2", "--beta", "2", "--delta", "0.5",
                "--window", "0:40", "--seed", seed_s, "--out", runner.path("sample_continuous.lrpe")});
    runner.run({"lrp", "sample", "--model", "discrete", "--d", "2", "--beta", "1", "--box", "0:99",
                "--seed", seed_s, "--out", runner.path("sample_discrete.lrpl")});
    runner.run({"lrp", "dist", "--in", runner.path("sample_continuous.lrpe"), "--d", "2", "--from", "1,1",
                "--to", "39,39", "20,5", "--out", runner.path("dist_continuous.csv")});
    runner.run({"lrp", "geodesic", "--in", runner.path("sample_continuous.lrpe"), "--d", "2", "--from",
                "1,1", "--to", "39,39", "--out", runner.path("geodesic_continuous.csv")});
    runner.run({"lrp", "ball", "--in", runner.path("sample_continuous.lrpe"), "--d", "2", "--resolution",
                "0.25", "--out", runner.path("ball_continuous.f32")},
               {runner.path("ball_continuous.f32.json")});
    const std::vector<std::string> changed = runner.rerun_all();
    Verdict v{changed.empty(), std::to_string(runner.command_count()) + " commands, " +
                                   std::to_string(runner.file_count()) + " files compared"};
    for (const std::string& f : changed) v.note += "; differs: " + f;
    report(11, "reproducibility",
           v, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
