/*
 * Copyright (c) 2026, The ordercheck authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/

#include "ordercheck/cli.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "ordercheck/builtin_models.hpp"
#include "ordercheck/decision_tree.hpp"
#include "ordercheck/direct_order.hpp"
#include "ordercheck/explorer.hpp"
#include "ordercheck/microcheck.hpp"
#include "ordercheck/pipeline.hpp"
#include "ordercheck/report.hpp"
#include "ordercheck/restorer.hpp"

namespace fs = std::filesystem;

namespace ordercheck {

namespace {

// Raised for bad invocations and unreadable inputs; maps to kExitUsage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec)
      throw UsageError("cannot create '" + path.parent_path().string() +
                       "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw UsageError("write to '" + path.string() + "' failed");
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string slug(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '.')
      o += c;
    else if (!o.empty() && o.back() != '-')
      o += '-';
  }
  while (!o.empty() && o.back() == '-') o.pop_back();
  return o;
}

std::string numbered(int index, const std::string& name, const char* ext) {
  std::ostringstream o;
  o << std::setw(3) << std::setfill('0') << index << "-" << slug(name) << ext;
  return o.str();
}

struct ModelArgs {
  std::string positional;
  std::string model;
  std::string spec;
};

void add_model_args(CLI::App* cmd, ModelArgs& m) {
  cmd->add_option("source", m.positional,
                  "builtin model (SC, TSO, RVWMO) or spec file");
  cmd->add_option("--model", m.model, "builtin model name");
  cmd->add_option("--spec", m.spec, "memory model spec file");
}

McmSpec resolve_model(const ModelArgs& m) {
  const int given = !m.positional.empty() + !m.model.empty() + !m.spec.empty();
  if (given != 1)
    throw UsageError("give exactly one model: a positional name or path, "
                     "--model, or --spec");
  if (!m.spec.empty()) return parse_spec(read_file(m.spec));
  if (!m.model.empty()) return load_builtin(upper(m.model));
  const auto& names = builtin::names();
  if (std::find(names.begin(), names.end(), upper(m.positional)) != names.end())
    return load_builtin(upper(m.positional));
  if (fs::exists(m.positional)) return parse_spec(read_file(m.positional));
  throw UsageError("'" + m.positional +
                   "' is neither a builtin model nor a readable spec file");
}

ForestCounts parse_expect(const std::string& s) {
  auto parts = detail::split(s, ',');
  if (parts.size() != 3)
    throw UsageError("--expect takes trees,trivial,leaves");
  std::size_t v[3];
  for (std::size_t k = 0; k < 3; ++k) {
    try {
      std::size_t used = 0;
      v[k] = std::stoul(parts[k], &used);
      if (used != parts[k].size()) throw std::invalid_argument(parts[k]);
    } catch (const std::exception&) {
      throw UsageError("--expect: '" + parts[k] + "' is not a count");
    }
  }
  return {v[0], v[1], v[2]};
}

std::string triple(const ForestCounts& c) {
  return "(" + std::to_string(c.n_trees) + ", " + std::to_string(c.n_trivial) +
         ", " + std::to_string(c.n_leaves) + ")";
}

LsqConfig load_config(const std::string& path, const std::string& bounds) {
  LsqConfig cfg;
  if (!path.empty()) {
    cfg = parse_config(read_file(path));
    if (cfg.name == "default") cfg.name = fs::path(path).stem().string();
  }
  if (!bounds.empty()) apply_bounds(cfg, bounds);
  return cfg;
}

SignalMap signals_by_name(const std::string& name) {
  if (name == "boom") return boom_signals();
  if (name == "microcheck") return microcheck_signals();
  throw UsageError("unknown signal map '" + name + "' (boom, microcheck)");
}

std::set<int> violating_nodes(const std::vector<LeafVerdict>& vs, int tree) {
  std::set<int> out;
  for (const auto& v : vs)
    if (v.tree == tree && !v.verdict.valid()) out.insert(v.node);
  return out;
}

const ExplorationTree& pick_tree(const Forest& f, const std::string& sel) {
  for (const auto& t : f.trees)
    if (t.name() == sel || std::to_string(t.index) == sel) return t;
  throw UsageError("no tree named or numbered '" + sel + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Memory-model compliance checks for load-store queues",
               "ordercheck"};
  app.require_subcommand(1);

  ModelArgs model;
  unsigned jobs = 1;
  bool all_observers = false;
  std::string out_dir, expect, lsq_path, bounds, replay_path, goals_path,
      tree_sel, signals = "boom", sketch_path, dot_path, json_path;
  bool dot = false, json = false;

  auto* counts = app.add_subcommand("counts", "tree, trivial and leaf counts");
  add_model_args(counts, model);
  counts->add_option("--expect", expect, "expected trees,trivial,leaves");
  counts->add_flag("--all-observers", all_observers,
                   "ignore per-rule observer restrictions");
  counts->add_flag("--json", json, "print JSON");
  counts->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 256u));

  auto* explore = app.add_subcommand("explore", "write exploration forest");
  add_model_args(explore, model);
  explore->add_option("--out", out_dir, "output directory");
  explore->add_flag("--dot", dot, "write one DOT file per tree");
  explore->add_flag("--json", json, "write forest and verdict JSON");
  explore->add_flag("--all-observers", all_observers,
                    "ignore per-rule observer restrictions");
  explore->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 256u));

  auto* dtree = app.add_subcommand("dtree", "synthesize decision trees");
  add_model_args(dtree, model);
  dtree->add_option("--out", out_dir, "output directory");
  dtree->add_flag("--dot", dot, "write DOT files");
  dtree->add_flag("--json", json, "write JSON files");
  dtree->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 256u));

  auto* goals = app.add_subcommand("goals", "emit reachability goals");
  add_model_args(goals, model);
  goals->add_option("--tree", tree_sel, "tree name or index");
  goals->add_option("--signals", signals, "signal map: boom or microcheck");
  goals->add_option("--out", out_dir, "write the goal file here");
  goals->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 256u));

  auto* verify_cmd = app.add_subcommand("verify", "check an LSQ configuration");
  add_model_args(verify_cmd, model);
  verify_cmd->add_option("--lsq-config", lsq_path, "LSQ config file")->required();
  verify_cmd->add_option("--bounds", bounds, "loads=N,invs=N,steps=N");
  verify_cmd->add_option("--json", json_path, "write the JSON report here");
  verify_cmd->add_option("--out", out_dir, "write witnesses and goal files here");
  verify_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 256u));

  auto* replay_cmd = app.add_subcommand("replay", "replay a witness");
  replay_cmd->add_option("witness,--replay", replay_path, "witness file")->required();
  replay_cmd->add_option("--lsq-config", lsq_path, "LSQ config file");
  replay_cmd->add_option("--bounds", bounds, "loads=N,invs=N,steps=N");
  replay_cmd->add_option("--goals", goals_path,
                         "goal file (default: the witness's goals section)");

  auto* order = app.add_subcommand("order", "directly ordered pairs");
  order->add_option("sketch", sketch_path, "program sketch file")->required();
  order->add_option("--model", model.model, "builtin model name");
  order->add_option("--spec", model.spec, "memory model spec file");
  order->add_option("--dot", dot_path, "write DOT of the reduced order here");
  order->add_flag("--json", json, "print JSON");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*counts) {
      McmSpec spec = resolve_model(model);
      Forest f = generate_forest(spec, {all_observers, jobs});
      ForestCounts c = f.counts();
      if (json)
        out << dump(counts_json(spec.name, c, all_observers));
      else
        out << spec.name << ": trees=" << c.n_trees
            << " trivial=" << c.n_trivial << " leaves=" << c.n_leaves << "\n";
      if (!expect.empty()) {
        ForestCounts want = parse_expect(expect);
        if (!(want == c)) {
          err << "count mismatch: expected " << triple(want) << ", got "
              << triple(c) << "\n";
          return kExitUsage;
        }
      }
      return kExitCompliant;
    }

    if (*explore) {
      McmSpec spec = resolve_model(model);
      if (!dot && !json) dot = json = true;
      if (out_dir.empty()) out_dir = "ordercheck-" + slug(spec.name);
      Forest f = generate_forest(spec, {all_observers, jobs});
      auto vs = classify_forest(f, jobs);
      const fs::path dir(out_dir);
      if (json) {
        write_file(dir / "forest.json", dump(forest_json(f)));
        write_file(dir / "verdicts.json", dump(verdicts_json(f, vs)));
      }
      if (dot)
        for (const auto& t : f.trees)
          write_file(dir / "dot" / numbered(t.index, t.name(), ".dot"),
                     tree_dot(t, violating_nodes(vs, t.index)));
      std::size_t bad = 0;
      for (const auto& v : vs) bad += !v.verdict.valid();
      const ForestCounts c = f.counts();
      out << spec.name << ": " << c.n_trees << " trees, " << c.n_trivial
          << " trivial, " << c.n_leaves << " leaves, " << bad
          << " violating leaves -> " << dir.string() << "\n";
      return kExitCompliant;
    }

    if (*dtree) {
      McmSpec spec = resolve_model(model);
      Forest f = generate_forest(spec, {false, jobs});
      auto vs = classify_forest(f, jobs);
      for (const auto& t : f.trees) {
        if (t.is_trivial() || violating_nodes(vs, t.index).empty()) continue;
        DecisionTree dt = build_decision_tree(t, vs);
        out << "[" << t.index << "] " << dt.name << "\n";
        for (const auto& n : dt.nodes) {
          out << "  " << n.id << ": ";
          if (n.leaf) {
            out << to_string(n.outcome) << "\n";
            continue;
          }
          out << n.text << " yes->" << n.yes << " no->" << n.no << "\n";
          if (!n.key_predicate.empty())
            out << "     key: " << n.key_predicate << "\n";
        }
        if (!out_dir.empty()) {
          const fs::path dir(out_dir);
          if (dot || !json)
            write_file(dir / numbered(t.index, t.name(), ".dot"),
                       dtree_dot(dt, t.index));
          if (json)
            write_file(dir / numbered(t.index, t.name(), ".json"),
                       dump(dtree_json(dt)));
        }
      }
      return kExitCompliant;
    }

    if (*goals) {
      McmSpec spec = resolve_model(model);
      const SignalMap map = signals_by_name(signals);
      Forest f = generate_forest(spec, {false, jobs});
      auto vs = classify_forest(f, jobs);
      std::string text;
      auto emit = [&](const ExplorationTree& t) {
        DecisionTree dt = build_decision_tree(t, vs);
        auto gs = emit_goals(dt, map);
        if (!gs.empty()) text += write_goals(gs, map, dt.name);
      };
      if (!tree_sel.empty()) {
        const auto& t = pick_tree(f, tree_sel);
        if (t.is_trivial()) throw UsageError("tree '" + t.name() + "' is trivial");
        emit(t);
      } else {
        for (const auto& t : f.trees)
          if (unmodeled_reason(spec, t).empty() &&
              !violating_nodes(vs, t.index).empty())
            emit(t);
      }
      if (out_dir.empty())
        out << text;
      else
        write_file(out_dir, text);
      return kExitCompliant;
    }

    if (*verify_cmd) {
      McmSpec spec = resolve_model(model);
      LsqConfig cfg = load_config(lsq_path, bounds);
      Forest f = generate_forest(spec, {false, jobs});
      auto vs = classify_forest(f, jobs);
      VerifyReport rep = verify(spec, f, vs, cfg, jobs);

      out << "model " << rep.model << ", config " << rep.config << " (loads<="
          << cfg.bounds.max_loads << ", invs<=" << cfg.bounds.max_invs
          << ", steps<=" << cfg.bounds.max_steps << ")\n";
      out << "design level: " << rep.design.size()
          << " explored trees have violating leaves\n";
      for (const auto& d : rep.design) {
        out << "  [" << d.tree << "] " << d.name << ": " << d.violations << "/"
            << d.leaves << " leaves violate; ";
        if (d.modeled)
          out << "goal set " << d.goal_set << "\n";
        else
          out << "not modeled: " << d.reason << "\n";
      }
      out << "implementation level: " << rep.goal_sets.size()
          << " distinct goal sets\n";
      for (std::size_t k = 0; k < rep.goal_sets.size(); ++k) {
        const auto& gs = rep.goal_sets[k];
        out << "  goal set " << k << " (" << detail::join(gs.trees, "; ")
            << "): " << to_string(gs.eval.verdict) << "\n";
        for (const auto& st : gs.eval.goals) {
          out << "    " << st.id << (st.violation ? " [violation]" : "") << ": "
              << to_string(st.result.status) << ", " << st.result.states
              << " states, depth " << st.result.depth << "\n";
          if (st.violation && st.result.witness) {
            Witness w = *st.result.witness;
            w.goals_text = gs.text;
            std::istringstream ws(w.str());
            for (std::string l; std::getline(ws, l);) {
              if (l == "goals") break;
              out << "      " << l << "\n";
            }
            if (!out_dir.empty())
              write_file(fs::path(out_dir) / ("witness-" + std::to_string(k) +
                                              "-" + st.id + ".txt"),
                         w.str());
          }
        }
        if (!out_dir.empty())
          write_file(fs::path(out_dir) / ("goals-" + std::to_string(k) + ".txt"),
                     gs.text);
      }
      if (!json_path.empty()) write_file(json_path, dump(verify_json(rep)));
      const char* verdict = rep.verdict == Reach::kUnreachable ? "compliant"
                            : rep.verdict == Reach::kReachable ? "violation"
                                                               : "inconclusive";
      out << "verdict: " << verdict << "\n";
      return rep.verdict == Reach::kUnreachable ? kExitCompliant
             : rep.verdict == Reach::kReachable ? kExitViolation
                                                : kExitInconclusive;
    }

    if (*replay_cmd) {
      LsqConfig cfg = load_config(lsq_path, bounds);
      Witness w = parse_witness(read_file(replay_path));
      std::string gtext = goals_path.empty() ? w.goals_text : read_file(goals_path);
      if (!w.goal.empty() && gtext.empty())
        throw UsageError("witness names goal " + w.goal +
                         " but no goals were given");
      auto gs = gtext.empty() ? std::vector<ReachabilityGoal>{}
                              : parse_goals(gtext, microcheck_signals());
      ReplayResult r = replay(cfg, w, gs);
      if (!r.ok) {
        err << "replay failed: " << r.error << "\n";
        return kExitUsage;
      }
      bool violation = false;
      for (const auto& g : gs)
        if (g.id == w.goal) violation = g.violation;
      out << "replay ok: " << w.actions.size() << " actions"
          << (w.goal.empty() ? "" : ", reaches " + w.goal)
          << (violation ? " (violation)" : "") << "\n";
      return violation ? kExitViolation : kExitCompliant;
    }

    if (*order) {
      McmSpec spec = resolve_model(model);
      ProgramSketch prog = parse_sketch(read_file(sketch_path));
      OrderDag induced = induced_order(spec, prog);
      OrderDag reduced = transitive_reduction(induced);
      if (json) {
        out << dump(order_json(prog, induced, reduced));
      } else {
        for (std::size_t i = 0; i < prog.size(); ++i)
          out << i << ": " << prog[i].str() << "\n";
        out << "directly ordered:";
        for (const auto& [u, v] : reduced.edges)
          out << " (" << u << "," << v << ")";
        out << "\n";
      }
      if (!dot_path.empty()) write_file(dot_path, order_dot(prog, reduced));
      return kExitCompliant;
    }
  } catch (const SpecError& e) {
    err << "spec error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace ordercheck
