#include "subdiv/app.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "subdiv/attack.h"
#include "subdiv/error.h"
#include "subdiv/grid_model.h"
#include "subdiv/impact.h"
#include "subdiv/security_graph.h"
#include "subdiv/text.h"

namespace subdiv {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t fnv1a(std::string_view data, std::uint64_t h) {
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void apply_bundle_dir(RunConfig& cfg, const std::string& dir) {
  auto fill = [&](std::string& field, std::initializer_list<const char*> names) {
    if (!field.empty()) return;
    for (const char* name : names) {
      const fs::path p = fs::path(dir) / name;
      if (fs::exists(p)) {
        field = p.string();
        return;
      }
    }
  };
  fill(cfg.cdf, {"system.cdf"});
  fill(cfg.submap, {"submap.json", "submap.csv"});
  fill(cfg.impact, {"impact.csv"});
  fill(cfg.template_path, {"template.json"});
  fill(cfg.palette, {"palette.json"});
  fill(cfg.scenario, {"scenario.json"});
}

namespace {

struct Sources {
  std::string cdf, submap, impact, tmpl, palette, scenario;
};

std::string read_if_set(const std::string& path) {
  return path.empty() ? std::string() : text::read_file(path);
}

Sources read_sources(const RunConfig& cfg) {
  return {read_if_set(cfg.cdf),      read_if_set(cfg.submap),  read_if_set(cfg.impact),
          read_if_set(cfg.template_path), read_if_set(cfg.palette), read_if_set(cfg.scenario)};
}

struct Model {
  std::optional<BusSystem> sys;
  std::optional<AttackScenario> scenario;
  double p_total = 0.0;
  std::vector<SubstationProfile> profiles;
  SmCatalog catalog;
  TemplateConfig tmpl;
  Palette palette = Palette::case_study();
  SubstationMap map;
  SecurityGraph m;
  DiversityGraph g;
  std::vector<double> psi;
  std::vector<Vertex> order;
  std::vector<int> substation_of;
};

void load_profiles(Model& md, const RunConfig& cfg, const Sources& src) {
  if (src.impact.empty()) throw InputError("no impact data given (--impact)");
  if (!src.scenario.empty()) md.scenario = AttackScenario::from_json(src.scenario);
  if (!src.cdf.empty()) md.sys = parse_cdf(src.cdf);

  std::optional<double> p_total = cfg.p_total_mw;
  if (!p_total && md.scenario) p_total = md.scenario->p_total_mw;
  if (!p_total && md.sys) p_total = md.sys->total_load_mw;
  if (p_total) md.p_total = *p_total;

  auto profiles = load_impact_csv(src.impact, p_total);
  ImpactConfig ic{cfg.threshold, p_total.value_or(1.0)};
  ic.validate();
  md.profiles = classify(std::move(profiles), ic);
}

std::unique_ptr<Model> load_model(const RunConfig& cfg, const Sources& src) {
  auto md = std::make_unique<Model>();
  load_profiles(*md, cfg, src);
  if (!md->sys) throw InputError("no bus system given (--cdf)");
  if (src.submap.empty()) throw InputError("no substation map given (--submap)");
  md->map = load_substation_map(src.submap);
  for (const auto& [sub, buses] : md->map.entries())
    if (!find_profile(md->profiles, sub))
      throw InputError(fmt::format("substation {} has no impact data", sub));

  if (md->scenario)
    for (const auto& [type, pi] : md->scenario->attack_likelihood)
      md->catalog.set_likelihood(type, pi);
  md->tmpl = src.tmpl.empty() ? TemplateConfig::defaults() : TemplateConfig::from_json(src.tmpl);
  if (!src.palette.empty()) md->palette = Palette::from_json(src.palette);

  std::vector<SubstationProfile> mapped;
  for (const auto& p : md->profiles)
    if (md->map.contains(p.substation_id)) mapped.push_back(p);
  md->m = build_security_graph(mapped, substation_adjacency(*md->sys, md->map), md->tmpl);
  md->g = extract_diversity_graph(md->m);
  md->psi = vulnerability_table(md->g, md->profiles, md->catalog);
  md->order = order_players(md->g, md->profiles, md->catalog);
  md->substation_of = md->g.substations();
  return md;
}

std::string hex(std::uint64_t h) { return fmt::format("{:016x}", h); }

std::string config_hash(std::string_view command, const RunConfig& cfg, const Sources& src) {
  std::uint64_t h = fnv1a(command);
  for (const std::string* s : {&src.cdf, &src.submap, &src.impact, &src.tmpl, &src.palette,
                               &src.scenario}) {
    h = fnv1a(fmt::format("|{}|", s->size()), h);
    h = fnv1a(*s, h);
  }
  std::string params = fmt::format("threshold={};seed={};repeat={};p_total={};algos=",
                                   cfg.threshold, cfg.seed, cfg.repeat,
                                   cfg.p_total_mw ? fmt::format("{}", *cfg.p_total_mw) : "-");
  for (Algorithm a : cfg.algorithms) params += fmt::format("{},", to_string(a));
  return hex(fnv1a(params, h));
}

struct Provenance {
  std::string command;
  std::string hash;
  std::uint64_t seed = 0;

  std::string csv_header() const { return fmt::format("# config_hash={} seed={}\n", hash, seed); }
  json to_json() const { return {{"command", command}, {"config_hash", hash}, {"seed", seed}}; }
};

// Aligned text and CSV views of one table.
struct Table {
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;

  std::string text() const {
    std::vector<std::size_t> width(headers.size());
    for (std::size_t i = 0; i < headers.size(); ++i) width[i] = headers[i].size();
    for (const auto& r : rows)
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    auto line = [&](const std::vector<std::string>& cells) {
      std::string s;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) s += "  ";
        s += fmt::format("{:<{}}", cells[i], i + 1 == cells.size() ? 0 : width[i]);
      }
      return s + "\n";
    };
    std::string out = line(headers);
    for (const auto& r : rows) out += line(r);
    return out;
  }

  std::string csv() const {
    auto line = [](const std::vector<std::string>& cells) {
      std::string s;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) s += ',';
        s += cells[i];
      }
      return s + "\n";
    };
    std::string out = line(headers);
    for (const auto& r : rows) out += line(r);
    return out;
  }
};

std::string num(double v, int digits = 4) { return fmt::format("{:.{}f}", v, digits); }

template <typename Range, typename Fn>
std::string join(const Range& items, std::string_view sep, const Fn& fn) {
  std::string s;
  bool first = true;
  for (const auto& x : items) {
    if (!first) s += sep;
    first = false;
    s += fn(x);
  }
  return s;
}

void write_file(const RunConfig& cfg, const std::string& name, const std::string& content) {
  if (cfg.out_dir.empty()) return;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  const fs::path p = fs::path(cfg.out_dir) / name;
  std::ofstream f(p, std::ios::binary);
  f << content;
  if (!f) throw InputError(fmt::format("cannot write {}", p.string()));
}

// Runs fn(0..count-1) on up to `workers` threads; rethrows the first
// failure in index order.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, const Fn& fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < count;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n = std::min(std::max<std::size_t>(workers, 1), count);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct RunOutcome {
  Algorithm algorithm = Algorithm::kGame;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  Coloring coloring;
  bool complete = false;
  std::string status = "ok";
  double sigma = 0.0;
  bool nash = false;
  std::size_t moves = 0;
};

std::uint64_t run_seed(std::uint64_t master, Algorithm a, std::size_t run) {
  return derive_seed(derive_seed(master, static_cast<std::uint64_t>(a)), run);
}

RunOutcome run_one(const Model& md, Algorithm a, std::size_t run, std::uint64_t master) {
  RunOutcome r;
  r.algorithm = a;
  r.run = run;
  r.seed = run_seed(master, a, run);
  const Graph& g = md.g.graph();
  switch (a) {
    case Algorithm::kGame: {
      GameResult res = color_game(g, md.palette, md.psi, md.order);
      r.coloring = std::move(res.coloring);
      r.moves = res.moves;
      if (!res.converged) r.status = "non_converged";
      break;
    }
    case Algorithm::kGreedy:
      r.coloring = color_greedy(g, md.palette);
      break;
    case Algorithm::kSequential:
      r.coloring = color_sequential(g, md.palette, md.substation_of, r.seed);
      break;
    case Algorithm::kRandomized:
      try {
        r.coloring = color_randomized(g, md.palette, r.seed);
      } catch (const AlgorithmError&) {
        r.status = "non_converged";
      }
      break;
  }
  r.coloring.seed = r.seed;
  r.complete = r.coloring.assignment.size() == g.size() && r.coloring.is_total();
  if (r.complete) {
    r.sigma = cumulative_index(r.coloring, md.psi, g, md.palette);
    r.nash = verify_nash(g, r.coloring, md.psi, md.palette).is_nash;
    if (!is_proper(g, r.coloring)) r.status = "non_converged";
  } else {
    r.status = "non_converged";
  }
  return r;
}

std::vector<RunOutcome> run_all(const Model& md, const RunConfig& cfg) {
  struct Task {
    Algorithm a;
    std::size_t run;
  };
  std::vector<Task> tasks;
  for (Algorithm a : cfg.algorithms) {
    const std::size_t runs = is_stochastic(a) ? cfg.repeat : 1;
    for (std::size_t r = 0; r < runs; ++r) tasks.push_back({a, r});
  }
  std::vector<RunOutcome> out(tasks.size());
  parallel_for(tasks.size(), cfg.workers, [&](std::size_t i) {
    out[i] = run_one(md, tasks[i].a, tasks[i].run, cfg.seed);
  });
  return out;
}

std::string coloring_dot(const Model& md, const RunOutcome& r) {
  std::string s = "graph diversity {\n  node [style=filled];\n";
  const Graph& g = md.g.graph();
  for (Vertex v = 0; v < g.size(); ++v) {
    const ColorIndex c = r.coloring.assignment.empty() ? kUncolored : r.coloring.assignment[v];
    const std::string name = c == kUncolored ? "none" : md.palette[c].name;
    s += fmt::format("  \"{}\" [label=\"{}\\n{}\", fillcolor=\"{}\", substation={}];\n",
                     md.g.sm(v).id, md.g.sm(v).id, name, text::to_lower(name),
                     md.g.sm(v).substation_id);
  }
  for (Vertex v = 0; v < g.size(); ++v)
    for (Vertex w : g.neighbors(v))
      if (v < w) s += fmt::format("  \"{}\" -- \"{}\";\n", md.g.sm(v).id, md.g.sm(w).id);
  return s + "}\n";
}

json coloring_json(const Model& md, const RunOutcome& r, const Provenance& prov) {
  json vertices = json::object();
  const Graph& g = md.g.graph();
  std::vector<double> pay, norm;
  if (r.complete) {
    pay = payoffs(r.coloring, md.psi, g, md.palette);
    norm = normalize(pay);
  }
  for (Vertex v = 0; v < g.size(); ++v) {
    const ColorIndex c = r.coloring.assignment.empty() ? kUncolored : r.coloring.assignment[v];
    json entry = {{"substation", md.g.sm(v).substation_id},
                  {"sm_type", to_string(*md.g.sm(v).sm_type)},
                  {"psi", md.psi[v]}};
    if (c != kUncolored) {
      entry["color"] = md.palette[c].name;
      entry["strength"] = md.palette.strength(c);
    } else {
      entry["color"] = nullptr;
    }
    if (r.complete) {
      entry["security_index"] = pay[v];
      entry["normalized_index"] = norm[v];
    }
    vertices[md.g.sm(v).id] = std::move(entry);
  }
  return {{"provenance", prov.to_json()},
          {"algorithm", to_string(r.algorithm)},
          {"run", r.run},
          {"seed", r.seed},
          {"status", r.status},
          {"sigma", r.sigma},
          {"colors_used", r.complete ? r.coloring.colors_used() : 0},
          {"rounds", r.coloring.rounds_used},
          {"nash", r.nash},
          {"vertices", std::move(vertices)}};
}

std::string file_tag(const RunOutcome& r) {
  return fmt::format("{}_{}", to_string(r.algorithm), r.run);
}

int cmd_impact(const RunConfig& cfg, std::ostream& out) {
  const Sources src = read_sources(cfg);
  Model md;
  load_profiles(md, cfg, src);
  const Provenance prov{"impact", config_hash("impact", cfg, src), cfg.seed};

  Table t{{"substation", "p_lol_mw", "l_star", "gamma", "class", "highest_criticality"}, {}};
  json rows = json::array();
  std::vector<int> his;
  for (const auto& p : md.profiles) {
    t.rows.push_back({std::to_string(p.substation_id), num(p.p_lol_mw, 2),
                      p.l_star ? num(*p.l_star, 3) : "-", fmt::format("{:.6g}", p.gamma),
                      std::string(to_string(p.impact_class)),
                      p.highest_criticality() ? "yes" : "no"});
    json row = {{"substation", p.substation_id},
                {"p_lol_mw", p.p_lol_mw},
                {"gamma", p.gamma},
                {"class", to_string(p.impact_class)},
                {"highest_criticality", p.highest_criticality()}};
    row["l_star"] = p.l_star ? json(*p.l_star) : json(nullptr);
    rows.push_back(std::move(row));
    if (p.impact_class == ImpactClass::kHigh) his.push_back(p.substation_id);
  }
  const std::string his_list = join(his, ", ", [](int s) { return std::to_string(s); });
  out << t.text() << fmt::format("HIS: {}\n", his.empty() ? "none" : his_list);

  write_file(cfg, "impact.csv", prov.csv_header() + t.csv());
  json doc = {{"provenance", prov.to_json()},
              {"threshold", cfg.threshold},
              {"his", his},
              {"substations", std::move(rows)}};
  if (md.p_total > 0) doc["p_total_mw"] = md.p_total;
  write_file(cfg, "impact.json", doc.dump(2) + "\n");
  return 0;
}

int cmd_color(const RunConfig& cfg, std::ostream& out) {
  const Sources src = read_sources(cfg);
  const auto md = load_model(cfg, src);
  const Provenance prov{"color", config_hash("color", cfg, src), cfg.seed};
  const auto runs = run_all(*md, cfg);

  Table t{{"algorithm", "run", "seed", "sigma", "colors_used", "rounds", "nash", "status"}, {}};
  for (const auto& r : runs) {
    t.rows.push_back({std::string(to_string(r.algorithm)), std::to_string(r.run),
                      std::to_string(r.seed), num(r.sigma),
                      std::to_string(r.complete ? r.coloring.colors_used() : 0),
                      std::to_string(r.coloring.rounds_used), r.nash ? "yes" : "no", r.status});
    write_file(cfg, fmt::format("color_{}.json", file_tag(r)),
               coloring_json(*md, r, prov).dump(2) + "\n");
    if (cfg.dot) write_file(cfg, fmt::format("color_{}.dot", file_tag(r)), coloring_dot(*md, r));
  }
  if (cfg.dot) write_file(cfg, "security_graph.dot", to_dot(md->m));
  out << fmt::format("diversity graph: {} SMs, {} edges, max degree {}, delta2 {}\n",
                     md->g.size(), md->g.graph().edge_count(), md->g.graph().max_degree(),
                     delta2(md->g.graph()));
  out << t.text();
  write_file(cfg, "summary.csv", prov.csv_header() + t.csv());
  return 0;
}

std::string substation_list(const std::set<int>& s) {
  return join(s, ";", [](int x) { return std::to_string(x); });
}

int cmd_attack(const RunConfig& cfg, std::ostream& out) {
  const Sources src = read_sources(cfg);
  const auto md = load_model(cfg, src);
  if (!md->scenario) throw InputError("no attack scenario given (--scenario)");
  const AttackScenario& sc = *md->scenario;
  for (int s : sc.target_substations)
    if (!md->map.contains(s)) throw InputError(fmt::format("scenario targets unknown substation {}", s));
  const Provenance prov{"attack", config_hash("attack", cfg, src), cfg.seed};

  std::vector<RunOutcome> runs(cfg.algorithms.size());
  parallel_for(runs.size(), cfg.workers, [&](std::size_t i) {
    runs[i] = run_one(*md, cfg.algorithms[i], 0, cfg.seed);
  });

  std::size_t entry_total = 0;
  for (const Asset& a : md->m.assets())
    if (a.is_sm() && a.is_entry_point) ++entry_total;

  Table t{{"algorithm", "seed", "mode", "k", "accessed_sms", "prerequisites", "propagation",
           "compromised", "entry_compromised_fraction", "total_p_lol_mw", "status"},
          {}};
  json rows = json::array();
  for (const auto& r : runs) {
    if (!r.complete) {
      t.rows.push_back({std::string(to_string(r.algorithm)), std::to_string(r.seed),
                        std::string(to_string(sc.mode)), std::to_string(sc.k), "", "", "", "",
                        num(0.0), num(0.0, 2), r.status});
      rows.push_back({{"algorithm", to_string(r.algorithm)}, {"status", r.status}});
      continue;
    }
    const ColoredNetwork net{md->m, md->g, r.coloring, md->palette};
    const AttackResult res = propagate(net, sc, md->profiles);
    std::size_t entry_hit = 0;
    for (std::size_t node : res.compromised_sms)
      if (md->m.asset(node).is_entry_point) ++entry_hit;
    const double frac = entry_total ? static_cast<double>(entry_hit) / entry_total : 0.0;
    std::vector<std::string> accessed;
    for (std::size_t node : res.accessed_sms) accessed.push_back(md->m.asset(node).id);
    t.rows.push_back({std::string(to_string(r.algorithm)), std::to_string(r.seed),
                      std::string(to_string(sc.mode)), std::to_string(sc.k),
                      join(accessed, ";", [](const std::string& s) { return s; }),
                      substation_list(res.prerequisites), substation_list(res.propagation),
                      substation_list(res.compromised_substations), num(frac),
                      num(res.total_p_lol_mw, 2), r.status});
    json paths = json::array();
    for (const auto& p : res.attack_paths) {
      json ids = json::array();
      for (std::size_t node : p) ids.push_back(md->m.asset(node).id);
      paths.push_back(std::move(ids));
    }
    json colors = json::array();
    for (ColorIndex c : res.exploited_colors) colors.push_back(md->palette[c].name);
    rows.push_back({{"algorithm", to_string(r.algorithm)},
                    {"seed", r.seed},
                    {"status", r.status},
                    {"accessed_sms", accessed},
                    {"attack_paths", std::move(paths)},
                    {"prerequisites", res.prerequisites},
                    {"propagation", res.propagation},
                    {"compromised_substations", res.compromised_substations},
                    {"compromised_sm_count", res.compromised_sms.size()},
                    {"entry_compromised_fraction", frac},
                    {"exploited_colors", std::move(colors)},
                    {"total_p_lol_mw", res.total_p_lol_mw}});
  }
  out << t.text();
  write_file(cfg, "attack.csv", prov.csv_header() + t.csv());
  json doc = {{"provenance", prov.to_json()},
              {"mode", to_string(sc.mode)},
              {"k", sc.k},
              {"targets", sc.target_substations},
              {"results", std::move(rows)}};
  write_file(cfg, "attack.json", doc.dump(2) + "\n");
  return 0;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  const Sources src = read_sources(cfg);
  const auto md = load_model(cfg, src);
  const Provenance prov{"compare", config_hash("compare", cfg, src), cfg.seed};
  const auto runs = run_all(*md, cfg);

  Table t{{"algorithm", "runs", "colors_used", "colors", "compromise_by_k", "sigma_mean",
           "sigma_stdev", "top_sms", "status"},
          {}};
  json rows = json::array();
  for (Algorithm a : cfg.algorithms) {
    std::vector<const RunOutcome*> mine;
    for (const auto& r : runs)
      if (r.algorithm == a) mine.push_back(&r);
    std::vector<double> sig;
    std::size_t failed = 0;
    for (const auto* r : mine) {
      if (r->complete) sig.push_back(r->sigma);
      if (r->status != "ok") ++failed;
    }
    double mean = 0.0, sd = 0.0;
    if (!sig.empty()) {
      for (double s : sig) mean += s;
      mean /= static_cast<double>(sig.size());
      if (sig.size() > 1) {
        for (double s : sig) sd += (s - mean) * (s - mean);
        sd = std::sqrt(sd / static_cast<double>(sig.size() - 1));
      }
    }
    const std::string status =
        failed == 0 ? "ok" : fmt::format("non_converged {}/{}", failed, mine.size());
    const RunOutcome* rep = nullptr;
    for (const auto* r : mine)
      if (r->complete) {
        rep = r;
        break;
      }
    if (!rep) {
      t.rows.push_back({std::string(to_string(a)), std::to_string(mine.size()), "0", "", "",
                        num(0.0), num(0.0), "", status});
      rows.push_back({{"algorithm", to_string(a)}, {"runs", mine.size()}, {"status", status}});
      continue;
    }
    const DiversityReport rep_d = diversity_report(md->g, rep->coloring, md->palette, md->psi);
    std::string by_k;
    for (std::size_t b = 0; b < rep_d.compromised_fraction.size(); ++b)
      by_k += fmt::format("{}k{}={:.2f}", b ? ";" : "", b + 1, rep_d.compromised_fraction[b]);
    t.rows.push_back({std::string(to_string(a)), std::to_string(mine.size()),
                      std::to_string(rep_d.colors_used),
                      join(rep_d.color_names, ";", [](const std::string& s) { return s; }),
                      by_k, num(mean), num(sd),
                      join(rep_d.top, ";", [](const RankedSm& s) { return s.id; }), status});
    json top = json::array();
    for (const auto& s : rep_d.top)
      top.push_back({{"id", s.id},
                     {"substation", s.substation_id},
                     {"security_index", s.payoff},
                     {"normalized_index", s.normalized}});
    json sigmas = json::array();
    for (const auto* r : mine) sigmas.push_back(r->complete ? json(r->sigma) : json(nullptr));
    rows.push_back({{"algorithm", to_string(a)},
                    {"runs", mine.size()},
                    {"status", status},
                    {"colors_used", rep_d.colors_used},
                    {"colors", rep_d.color_names},
                    {"compromised_fraction_by_k", rep_d.compromised_fraction},
                    {"sigma_mean", mean},
                    {"sigma_stdev", sd},
                    {"sigma_runs", std::move(sigmas)},
                    {"top_sms", std::move(top)}});
  }
  out << fmt::format("diversity graph: {} SMs, {} edges, max degree {}, delta2 {}\n",
                     md->g.size(), md->g.graph().edge_count(), md->g.graph().max_degree(),
                     delta2(md->g.graph()));
  out << t.text();
  write_file(cfg, "compare.csv", prov.csv_header() + t.csv());
  json doc = {{"provenance", prov.to_json()}, {"algorithms", std::move(rows)}};
  write_file(cfg, "compare.json", doc.dump(2) + "\n");
  return 0;
}

std::vector<Algorithm> parse_algorithms(const std::string& list) {
  std::vector<Algorithm> out;
  for (std::string_view part : text::split(list, ',')) {
    part = text::trim(part);
    if (part.empty()) continue;
    if (part == "all") {
      for (Algorithm a : {Algorithm::kGame, Algorithm::kGreedy, Algorithm::kSequential,
                          Algorithm::kRandomized})
        if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
      continue;
    }
    const auto a = algorithm_from_string(part);
    if (!a) throw InputError(fmt::format("unknown algorithm '{}'", part));
    if (std::find(out.begin(), out.end(), *a) == out.end()) out.push_back(*a);
  }
  if (out.empty()) throw InputError("no algorithm selected");
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string bundle, algos = "game,greedy,sequential,random";
  double p_total = 0.0;

  CLI::App app{"Diverse software allocation for substation security mechanisms", "subdiv"};
  app.require_subcommand(1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--bundle", bundle, "Directory with the input bundle");
    sub->add_option("--impact", cfg.impact, "Impact data CSV");
    sub->add_option("--cdf", cfg.cdf, "Bus system in IEEE common data format");
    sub->add_option("--scenario", cfg.scenario, "Attack scenario JSON");
    sub->add_option("--threshold", cfg.threshold, "HIS threshold on gamma");
    sub->add_option("--p-total", p_total, "Total system load, MW");
    sub->add_option("--seed", cfg.seed, "Master seed");
    sub->add_option("--out", cfg.out_dir, "Output directory");
    sub->add_option("--submap", cfg.submap, "Substation to bus map (JSON or CSV)");
    sub->add_option("--template", cfg.template_path, "Substation template JSON");
    sub->add_option("--palette", cfg.palette, "Palette JSON");
    sub->add_option("--algos", algos, "Comma separated: game,greedy,sequential,random");
    sub->add_option("--repeat", cfg.repeat, "Runs per stochastic algorithm");
    sub->add_option("--workers", cfg.workers, "Concurrent runs");
    sub->add_flag("--dot", cfg.dot, "Also write DOT graphs");
  };
  auto* impact = app.add_subcommand("impact", "Impact factors and HIS/LIS classes");
  auto* color = app.add_subcommand("color", "Color the diversity graph");
  auto* attack = app.add_subcommand("attack", "Attack propagation per coloring");
  auto* compare = app.add_subcommand("compare", "Compare coloring algorithms");
  for (auto* s : {impact, color, attack, compare}) add_common(s);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--p-total")) cfg.p_total_mw = p_total;
    if (!bundle.empty()) apply_bundle_dir(cfg, bundle);
    if (const char* env = std::getenv("SUBDIV_DATA_DIR"); env && *env)
      apply_bundle_dir(cfg, env);
    cfg.algorithms = parse_algorithms(algos);
    if (cfg.repeat < 1) throw InputError("--repeat must be at least 1");
    if (cfg.workers < 1) throw InputError("--workers must be at least 1");

    if (sub == impact) return cmd_impact(cfg, out);
    if (sub == color) return cmd_color(cfg, out);
    if (sub == attack) return cmd_attack(cfg, out);
    return cmd_compare(cfg, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace subdiv
