#include "lrp/cli.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lrp/coupling.hpp"
#include "lrp/errors.hpp"
#include "lrp/estimators.hpp"
#include "lrp/io.hpp"
#include "lrp/metric.hpp"
#include "lrp/sampler.hpp"
#include "lrp/suites.hpp"

namespace lrp {

using ojson = nlohmann::ordered_json;

namespace {

struct Options {
  int d = 1;
  std::vector<double> beta = {1.0};
  double delta = 1.0;
  double delta_max = kInfinity;
  std::string window;
  std::string box;
  std::uint64_t seed = 0;
  std::string model = "discrete";
  std::string in;
  std::string from;
  std::vector<std::string> to;
  std::string source;
  double resolution = 1.0;
  std::string n_schedule = "1,2,4,8,16,32,64,128,256,512,1024";
  std::string suite;
  double scale = 1.0;
  bool quiet = false;
  std::string out;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw InvalidArgument("not a number: '" + s + "'");
  return v;
}

std::int64_t parse_int(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("not an integer: '" + s + "'");
  }
  if (used != s.size()) throw InvalidArgument("not an integer: '" + s + "'");
  return v;
}

// "lo:hi" for every axis, or one "lo:hi" per axis separated by commas.
std::vector<std::pair<std::string, std::string>> parse_ranges(const std::string& text, int d,
                                                              const char* what) {
  require(!text.empty(), std::string("--") + what + " is required");
  std::vector<std::pair<std::string, std::string>> out;
  for (const std::string& part : split(text, ',')) {
    const auto colon = part.find(':');
    require(colon != std::string::npos, std::string("malformed --") + what + ": '" + text + "'");
    out.emplace_back(part.substr(0, colon), part.substr(colon + 1));
  }
  if (out.size() == 1) out.resize(static_cast<std::size_t>(d), out.front());
  require(static_cast<int>(out.size()) == d,
          std::string("--") + what + " needs one range or " + std::to_string(d));
  return out;
}

Window parse_window(const std::string& text, int d) {
  Point lo(d), hi(d);
  const auto r = parse_ranges(text, d, "window");
  for (int m = 0; m < d; ++m) {
    lo[m] = parse_double(r[static_cast<std::size_t>(m)].first);
    hi[m] = parse_double(r[static_cast<std::size_t>(m)].second);
    require(lo[m] < hi[m], "window must have lo < hi on every axis");
  }
  return Window(lo, hi);
}

IntBox parse_box(const std::string& text, int d) {
  Site lo(d), hi(d);
  const auto r = parse_ranges(text, d, "box");
  for (int m = 0; m < d; ++m) {
    lo[m] = parse_int(r[static_cast<std::size_t>(m)].first);
    hi[m] = parse_int(r[static_cast<std::size_t>(m)].second);
    require(lo[m] <= hi[m], "box must have lo <= hi on every axis");
  }
  return IntBox(lo, hi);
}

Point parse_point(const std::string& text, int d) {
  const auto parts = split(text, ',');
  require(static_cast<int>(parts.size()) == d,
          "point '" + text + "' needs " + std::to_string(d) + " coordinates");
  Point p(d);
  for (int m = 0; m < d; ++m) p[m] = parse_double(parts[static_cast<std::size_t>(m)]);
  return p;
}

Site parse_site(const std::string& text, int d) {
  const auto parts = split(text, ',');
  require(static_cast<int>(parts.size()) == d,
          "site '" + text + "' needs " + std::to_string(d) + " coordinates");
  Site s(d);
  for (int m = 0; m < d; ++m) s[m] = parse_int(parts[static_cast<std::size_t>(m)]);
  return s;
}

ModelParams params_of(const Options& o) {
  require(o.beta.size() == 1, "this command takes a single --beta");
  ModelParams p{o.d, o.beta.front(), o.delta, o.delta_max, o.seed};
  p.validate();
  return p;
}

// A sample read from --in, or drawn from the flags.
struct Sample {
  bool lattice = true;
  LatticeGraph graph;
  EdgeConfiguration config;
  int dim() const { return lattice ? graph.box.dim() : config.window.dim(); }
};

Sample draw_sample(const Options& o) {
  Sample s;
  const ModelParams p = params_of(o);
  const Stream stream = derive_stream(o.seed, "sample");
  if (o.model == "discrete") {
    s.graph = sample_discrete(p, parse_box(o.box, o.d), stream);
  } else if (o.model == "continuous") {
    s.lattice = false;
    s.config = sample_continuous(p, parse_window(o.window, o.d), stream);
  } else {
    throw InvalidArgument("--model must be discrete or continuous");
  }
  return s;
}

Sample load_or_draw(const Options& o) {
  if (o.in.empty()) return draw_sample(o);
  Sample s;
  if (sniff_sample_file(o.in) == "lattice") {
    s.graph = read_lattice_file(o.in);
  } else {
    s.lattice = false;
    s.config = read_edge_file(o.in);
  }
  return s;
}

std::string coords_csv(const Point& p) {
  std::string out;
  for (int m = 0; m < p.dim; ++m) {
    if (m) out += ',';
    out += format_double(p[m]);
  }
  return out;
}

std::string coord_header(const char* prefix, int d) {
  std::string out;
  for (int m = 0; m < d; ++m) {
    if (m) out += ',';
    out += prefix + std::to_string(m);
  }
  return out;
}

std::string trace_csv(const PathTrace& t) {
  const int d = t.nodes.front().dim;
  std::string out = "step,time," + coord_header("x", d) + ",hop\n";
  double time = 0.0;
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    bool hop = false;
    if (i > 0) {
      hop = t.hop_flags[i - 1];
      if (!hop) time += euclidean(t.nodes[i - 1], t.nodes[i]);
    }
    out += std::to_string(i) + ',' + format_double(time) + ',' + coords_csv(t.nodes[i]) + ',' +
           (hop ? "1" : "0") + '\n';
  }
  return out;
}

struct Run {
  std::string command;
  std::vector<std::string> args;
  Options opt;
  std::vector<std::string> outputs;
  ojson extra = ojson::object();
};

ojson options_json(const Options& o) {
  ojson j;
  j["d"] = o.d;
  j["beta"] = o.beta;
  j["delta"] = o.delta;
  j["delta_max"] = std::isinf(o.delta_max) ? ojson("inf") : ojson(o.delta_max);
  j["window"] = o.window;
  j["box"] = o.box;
  j["seed"] = o.seed;
  j["model"] = o.model;
  j["in"] = o.in;
  j["in_digest"] = o.in.empty() ? "" : file_digest(o.in);
  j["from"] = o.from;
  j["to"] = o.to;
  j["source"] = o.source;
  j["resolution"] = o.resolution;
  j["n_schedule"] = o.n_schedule;
  j["suite"] = o.suite;
  j["scale"] = o.scale;
  j["out"] = o.out;
  return j;
}

void write_manifest(const Run& run, double wall_time) {
  ojson m;
  m["command"] = run.command;
  m["args"] = run.args;
  m["parameters"] = options_json(run.opt);
  m["seed"] = run.opt.seed;
  m["version"] = kToolkitVersion;
  m["wall_time_s"] = wall_time;
  ojson digests = ojson::object();
  for (const std::string& path : run.outputs) digests[path] = file_digest(path);
  m["outputs"] = digests;
  if (!run.extra.empty()) m["extra"] = run.extra;
  atomic_write(run.opt.out + ".manifest.json", m.dump(2) + "\n");
}

// ---------------------------------------------------------------------------

int cmd_sample(Run& run) {
  const Sample s = draw_sample(run.opt);
  if (s.lattice) {
    write_lattice_file(run.opt.out, s.graph);
    run.extra["long_edges"] = s.graph.long_edges.size();
  } else {
    write_edge_file(run.opt.out, s.config);
    run.extra["edges"] = s.config.edges.size();
  }
  run.outputs.push_back(run.opt.out);
  return kExitOk;
}

int cmd_dist(Run& run) {
  const Options& o = run.opt;
  const Sample s = load_or_draw(o);
  const int d = s.dim();
  require(!o.from.empty() && !o.to.empty(), "dist needs --from and --to");
  std::string csv = coord_header("x", d) + ',' + coord_header("y", d) + ",distance,hops\n";
  if (s.lattice) {
    const LatticeMetric metric(s.graph);
    const Site u = parse_site(o.from, d);
    require(s.graph.box.contains(u), "--from lies outside the box");
    for (const std::string& t : o.to) {
      const Site v = parse_site(t, d);
      const DistanceResult r = metric.geodesic(u, v);
      csv += coords_csv(u.to_point()) + ',' + coords_csv(v.to_point()) + ',' +
             format_double(r.value) + ',' + std::to_string(r.trace.hop_count) + '\n';
    }
  } else {
    const ContinuousMetric metric(s.config, s.config.window);
    const Point x = parse_point(o.from, d);
    for (const std::string& t : o.to) {
      const Point y = parse_point(t, d);
      const DistanceResult r = metric.geodesic(x, y);
      csv += coords_csv(x) + ',' + coords_csv(y) + ',' + format_double(r.value) + ',' +
             std::to_string(r.trace.hop_count) + '\n';
    }
  }
  atomic_write(o.out, csv);
  run.outputs.push_back(o.out);
  return kExitOk;
}

int cmd_geodesic(Run& run) {
  const Options& o = run.opt;
  const Sample s = load_or_draw(o);
  const int d = s.dim();
  require(!o.from.empty() && o.to.size() == 1, "geodesic needs --from and one --to");
  DistanceResult r;
  if (s.lattice) {
    const Site u = parse_site(o.from, d);
    require(s.graph.box.contains(u), "--from lies outside the box");
    r = bfs_geodesic(s.graph, u, parse_site(o.to.front(), d));
  } else {
    r = continuous_distance(s.config, parse_point(o.from, d), parse_point(o.to.front(), d),
                            s.config.window);
  }
  run.extra["distance"] = r.value;
  run.extra["hops"] = r.trace.hop_count;
  atomic_write(o.out, trace_csv(r.trace));
  run.outputs.push_back(o.out);
  return kExitOk;
}

int cmd_ball(Run& run) {
  const Options& o = run.opt;
  const Sample s = load_or_draw(o);
  const int d = s.dim();
  DistanceField field;
  if (s.lattice) {
    Site src(d);
    if (!o.source.empty()) {
      src = parse_site(o.source, d);
    } else {
      for (int m = 0; m < d; ++m) src[m] = (s.graph.box.lo[m] + s.graph.box.hi[m]) / 2;
    }
    require(s.graph.box.contains(src), "--source lies outside the box");
    field = bfs_distance(s.graph, src);
  } else {
    const Point src = o.source.empty() ? s.config.window.center() : parse_point(o.source, d);
    require(o.resolution > 0.0, "--resolution must be positive");
    field = continuous_ball_field(s.config, src, s.config.window, o.resolution);
  }
  ojson meta;
  meta["model"] = s.lattice ? "discrete" : "continuous";
  meta["beta"] = s.lattice ? s.graph.params.beta : s.config.params.beta;
  meta["seed"] = s.lattice ? s.graph.params.seed : s.config.params.seed;
  write_raster(o.out, field, meta.dump());
  run.outputs.push_back(o.out);
  run.outputs.push_back(o.out + ".json");
  return kExitOk;
}

// diam([-n, n]^d) in the ambient metric of the whole sample, for every n in
// the schedule, from one breadth-first search per site of the largest box.
std::vector<std::int64_t> nested_diameters(const LatticeGraph& g,
                                           const std::vector<std::int64_t>& schedule) {
  const int d = g.box.dim();
  const std::int64_t n_max = schedule.back();
  const IntBox outer = IntBox::cube(d, -n_max, n_max);
  require(g.box.contains(outer), "n schedule exceeds the sample box");
  const std::int64_t count = outer.count();
  if (static_cast<double>(count) * static_cast<double>(g.box.count()) > 2e11)
    throw ResourceLimit("diameter computation too large for this n schedule and box");
  const LatticeMetric metric(g);
  auto level = [&](const Site& s) {
    std::int64_t l = 0;
    for (int m = 0; m < d; ++m) l = std::max(l, std::abs(s[m]));
    return l;
  };
  std::vector<std::int64_t> by_level(static_cast<std::size_t>(n_max) + 1, 0);
  std::vector<std::int64_t> levels(static_cast<std::size_t>(count));
  std::vector<std::int64_t> global(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    const Site s = outer.site(i);
    levels[static_cast<std::size_t>(i)] = level(s);
    global[static_cast<std::size_t>(i)] = g.box.index(s);
  }
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(thread_count(), count));
  std::vector<std::vector<std::int64_t>> partial(workers, by_level);
  parallel_for(workers, [&](std::size_t w) {
    std::vector<std::int32_t> dist;
    std::vector<std::int64_t> queue;
    auto& best = partial[w];
    for (std::int64_t i = static_cast<std::int64_t>(w); i < count;
         i += static_cast<std::int64_t>(workers)) {
      metric.distances_from(global[static_cast<std::size_t>(i)], dist, queue);
      const std::int64_t li = levels[static_cast<std::size_t>(i)];
      for (std::int64_t j = 0; j < count; ++j) {
        const std::int64_t l = std::max(li, levels[static_cast<std::size_t>(j)]);
        const std::int64_t v = dist[static_cast<std::size_t>(global[static_cast<std::size_t>(j)])];
        if (v > best[static_cast<std::size_t>(l)]) best[static_cast<std::size_t>(l)] = v;
      }
    }
  });
  for (const auto& p : partial)
    for (std::size_t l = 0; l < by_level.size(); ++l) by_level[l] = std::max(by_level[l], p[l]);
  for (std::size_t l = 1; l < by_level.size(); ++l)
    by_level[l] = std::max(by_level[l], by_level[l - 1]);
  std::vector<std::int64_t> out;
  for (std::int64_t n : schedule) out.push_back(by_level[static_cast<std::size_t>(n)]);
  return out;
}

int cmd_diam(Run& run) {
  const Options& o = run.opt;
  std::vector<std::int64_t> schedule;
  for (const std::string& s : split(o.n_schedule, ',')) schedule.push_back(parse_int(s));
  require(!schedule.empty() && std::is_sorted(schedule.begin(), schedule.end()) &&
              schedule.front() >= 0,
          "--n-schedule must be a nondecreasing list of nonnegative integers");
  std::vector<LatticeGraph> graphs;
  if (!o.in.empty()) {
    require(sniff_sample_file(o.in) == "lattice", "diam needs a lattice sample");
    graphs.push_back(read_lattice_file(o.in));
  } else {
    for (double b : o.beta) require(std::isfinite(b) && b > 0.0, "beta must be positive");
    require(std::is_sorted(o.beta.begin(), o.beta.end()), "--beta list must be increasing");
    graphs = coupled_lattice_samples(o.d, o.beta, parse_box(o.box, o.d),
                                     derive_stream(o.seed, "sample"));
  }
  std::string csv = "beta,n,diam\n";
  ojson curves = ojson::array();
  for (const LatticeGraph& g : graphs) {
    const std::vector<std::int64_t> diam = nested_diameters(g, schedule);
    for (std::size_t i = 0; i < schedule.size(); ++i)
      csv += format_double(g.params.beta) + ',' + std::to_string(schedule[i]) + ',' +
             std::to_string(diam[i]) + '\n';
    curves.push_back({{"beta", g.params.beta}, {"diam", diam}});
  }
  run.extra["curves"] = curves;
  atomic_write(o.out, csv);
  run.outputs.push_back(o.out);
  return kExitOk;
}

int cmd_suite(Run& run) {
  const Options& o = run.opt;
  if (!is_suite(o.suite)) throw InvalidArgument("unknown suite: " + o.suite);
  const SuiteReport rep = run_suite(o.suite, SuiteConfig{o.seed, o.scale});
  atomic_write(o.out, rep.to_json().dump(2) + "\n");
  run.outputs.push_back(o.out);
  if (!o.quiet)
    for (const CheckResult& c : rep.checks)
      std::printf("%s %s/%s\n", c.pass ? "PASS" : "FAIL", rep.suite.c_str(), c.name.c_str());
  return rep.pass() ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  Options o;
  CLI::App app{"Simulation and analysis of critical long-range percolation", "lrp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolkitVersion);

  auto model_flags = [&](CLI::App* c) {
    c->add_option("--d", o.d, "dimension");
    c->add_option("--beta", o.beta, "intensity (a comma list for diam)")->delimiter(',');
    c->add_option("--delta", o.delta, "smallest edge scope");
    c->add_option("--delta-max", o.delta_max, "scope cutoff (continuous)");
    c->add_option("--window", o.window, "continuous window lo:hi[,lo:hi...]");
    c->add_option("--box", o.box, "lattice box lo:hi[,lo:hi...]");
    c->add_option("--seed", o.seed, "master seed");
    c->add_option("--model", o.model, "discrete or continuous")
        ->check(CLI::IsMember({"discrete", "continuous"}));
  };
  auto out_flag = [&](CLI::App* c) { c->add_option("--out", o.out, "output file")->required(); };

  std::map<CLI::App*, std::function<int(Run&)>> handlers;
  CLI::App* sample = app.add_subcommand("sample", "draw a sample and write it to a file");
  model_flags(sample);
  out_flag(sample);
  handlers[sample] = cmd_sample;

  for (const char* name : {"dist", "geodesic", "ball"}) {
    CLI::App* c = app.add_subcommand(name, std::string(name) + " queries on a sample");
    model_flags(c);
    c->add_option("--in", o.in, "sample file (otherwise drawn from the flags)");
    out_flag(c);
    handlers[c] = std::string(name) == "dist" ? cmd_dist
                  : std::string(name) == "geodesic" ? cmd_geodesic
                                                    : cmd_ball;
    if (std::string(name) == "ball") {
      c->add_option("--source", o.source, "source point (default: center)");
      c->add_option("--resolution", o.resolution, "raster cell side (continuous)");
    } else {
      c->add_option("--from", o.from, "start point x0[,x1...]");
      c->add_option("--to", o.to, "end point(s)");
    }
  }

  CLI::App* diam = app.add_subcommand("diam", "diameters of nested boxes [-n, n]^d");
  model_flags(diam);
  diam->add_option("--in", o.in, "lattice sample file");
  diam->add_option("--n-schedule", o.n_schedule, "comma list of n");
  out_flag(diam);
  handlers[diam] = cmd_diam;

  for (const char* name : {"estimate", "verify"}) {
    CLI::App* c = app.add_subcommand(name, "run a named estimation or verification suite");
    c->add_option("--suite", o.suite, "suite name")->required();
    c->add_option("--seed", o.seed, "master seed");
    c->add_option("--scale", o.scale, "fraction of the full replicate counts");
    c->add_flag("--quiet", o.quiet, "do not list the checks on stdout");
    out_flag(c);
    handlers[c] = cmd_suite;
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  Run run;
  run.args.assign(args.begin() + (args.empty() ? 0 : 1), args.end());
  for (auto& [cmd, fn] : handlers) {
    if (!cmd->parsed()) continue;
    run.command = cmd->get_name();
    run.opt = o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const int code = fn(run);
      write_manifest(run,
                     std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      return code;
    } catch (const InvalidArgument& e) {
      std::cerr << "lrp: " << e.what() << "\n";
      return kExitUsage;
    } catch (const FormatError& e) {
      std::cerr << "lrp: " << e.what() << "\n";
      return kExitUsage;
    } catch (const ResourceLimit& e) {
      std::cerr << "lrp: " << e.what() << "\n";
      return kExitResource;
    } catch (const std::exception& e) {
      std::cerr << "lrp: " << e.what() << "\n";
      return kExitVerifyFailed;
    }
  }
  return kExitUsage;
}

int run_cli(int argc, char** argv) {
  return run_cli(std::vector<std::string>(argv, argv + argc));
}

}  // namespace lrp
