#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "qsync/channels.hpp"
#include "qsync/explore.hpp"
#include "qsync/lemma_checks.hpp"
#include "qsync/sync_search.hpp"
#include "qsync/textfmt.hpp"

namespace {

using namespace qsync;

enum class Cmd { channels, sync_check, search, bound, certify, explore_cmd, verify };

struct RunConfig {
  Cmd cmd = Cmd::channels;
  int n = 1;
  std::string word;
  int max_len = 12;
  int depth = 4;
  int s_max = 32;
  std::uint64_t trials = 10000;
  int l = 1;
  double epsilon = 0.4;
  double tol = 1e-9;
  double grid = 1e-9;
  std::uint64_t seed = 20250101;
  std::string format = "json";
  std::string output;
  bool quiet = false;
  bool no_self_loops = false;
};

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw Error("OutputError", "cannot open " + cfg.output);
  f << text << "\n";
}

void progress(const RunConfig& cfg, const std::string& line) {
  if (!cfg.quiet) std::cerr << line << "\n";
}

std::string json_optional_matrix(const std::optional<DensityMatrix>& m) {
  return m ? json_matrix(m->mat()) : std::string("null");
}

std::string matrix_text(const Mat3& m, const std::string& indent) {
  std::string out;
  for (int i = 0; i < 3; ++i) {
    out += indent + "[";
    for (int j = 0; j < 3; ++j) {
      if (j > 0) out += "  ";
      out += fmt_complex6(m(i, j));
    }
    out += "]\n";
  }
  return out;
}

std::string channel_json(const KrausChannel& ch) {
  std::string out = "{\"label\":\"" + json_escape(ch.label()) + "\",\"factors\":[";
  for (std::size_t i = 0; i < ch.factors().size(); ++i) {
    if (i > 0) out += ",";
    out += json_matrix(ch.factors()[i]);
  }
  out += "],\"completeness_defect\":" + fmt_double(ch.completeness_defect()) + "}";
  return out;
}

int run_channels(const RunConfig& cfg) {
  const ChannelFamilyParam param(cfg.n);
  const KrausChannel a = channel_a();
  const KrausChannel b = channel_b(param);
  if (cfg.format == "text") {
    std::string out = "n = " + std::to_string(cfg.n) +
                      "\ntheta = " + fmt_double(param.theta()) + "\n";
    out += "channel A (defect " + fmt_double(a.completeness_defect()) + "):\n";
    for (const Mat3& f : a.factors()) out += matrix_text(f, "  ") + "\n";
    out += "channel " + b.label() + " (defect " +
           fmt_double(b.completeness_defect()) + "):\n";
    for (const Mat3& f : b.factors()) out += matrix_text(f, "  ");
    emit(cfg, out);
  } else {
    emit(cfg, "{\"n\":" + std::to_string(cfg.n) +
                  ",\"theta\":" + fmt_double(param.theta()) +
                  ",\"A\":" + channel_json(a) + ",\"B\":" + channel_json(b) +
                  "}");
  }
  return 0;
}

int run_sync_check(const RunConfig& cfg) {
  const Word w = Word::parse(cfg.word);
  const SyncVerdict v = is_synchronizing(w, ChannelFamilyParam(cfg.n), cfg.tol);
  progress(cfg, "probes: 9, diameter " + fmt_double(v.image_diameter));
  if (cfg.format == "text") {
    std::string out = "word = " + w.str() + "\nn = " + std::to_string(cfg.n) +
                      "\nsynchronizing = " +
                      (v.synchronizing ? "true" : "false") +
                      "\nimage_diameter = " + fmt_double(v.image_diameter) + "\n";
    if (v.common_image) {
      out += "common_image:\n" + matrix_text(v.common_image->mat(), "  ");
    }
    emit(cfg, out);
  } else {
    emit(cfg, "{\"word\":\"" + w.str() + "\",\"n\":" + std::to_string(cfg.n) +
                  ",\"tol\":" + fmt_double(cfg.tol) + ",\"synchronizing\":" +
                  (v.synchronizing ? "true" : "false") +
                  ",\"image_diameter\":" + fmt_double(v.image_diameter) +
                  ",\"common_image\":" + json_optional_matrix(v.common_image) +
                  "}");
  }
  return 0;
}

int run_search(const RunConfig& cfg) {
  const SearchResult r =
      minimal_sync_word(ChannelFamilyParam(cfg.n), cfg.max_len, cfg.tol);
  progress(cfg, "words checked: " + std::to_string(r.words_checked));
  if (cfg.format == "text") {
    std::string out = "n = " + std::to_string(cfg.n) +
                      "\nmax_len = " + std::to_string(cfg.max_len) +
                      "\nfound = " + (r.word ? "true" : "false") + "\n";
    if (r.word) {
      out += "word = " + r.word->str() +
             "\nlength = " + std::to_string(r.word->size()) + "\n";
    }
    out += "words_checked = " + std::to_string(r.words_checked);
    emit(cfg, out);
  } else {
    std::string out = "{\"n\":" + std::to_string(cfg.n) +
                      ",\"max_len\":" + std::to_string(cfg.max_len) +
                      ",\"tol\":" + fmt_double(cfg.tol) + ",\"found\":" +
                      (r.word ? "true" : "false");
    out += ",\"word\":";
    out += r.word ? "\"" + r.word->str() + "\"" : std::string("null");
    out += ",\"length\":";
    out += r.word ? std::to_string(r.word->size()) : std::string("null");
    out += ",\"words_checked\":" + std::to_string(r.words_checked) + "}";
    emit(cfg, out);
  }
  return 0;
}

int run_bound(const RunConfig& cfg) {
  const TheoremParams p = n_for_no_sync_up_to(cfg.l, cfg.epsilon);
  if (cfg.format == "text") {
    emit(cfg, "l = " + std::to_string(p.l) +
                  "\nepsilon = " + fmt_double(p.epsilon) +
                  "\nepsilon_prime = " + fmt_double(p.epsilon_prime) +
                  "\nn = " + std::to_string(p.n) +
                  "\ntheta = " + fmt_double(p.theta()));
  } else {
    emit(cfg, "{\"l\":" + std::to_string(p.l) +
                  ",\"epsilon\":" + fmt_double(p.epsilon) +
                  ",\"epsilon_prime\":" + fmt_double(p.epsilon_prime) +
                  ",\"n\":" + std::to_string(p.n) +
                  ",\"theta\":" + fmt_double(p.theta()) + "}");
  }
  return 0;
}

int run_certify(const RunConfig& cfg) {
  const NoSyncCertificate c = no_sync_certificate(cfg.n, cfg.l);
  progress(cfg, "words checked: " + std::to_string(c.words_checked));
  if (cfg.format == "text") {
    emit(cfg,
         "n = " + std::to_string(c.n) + "\nl = " + std::to_string(c.l) +
             "\ntheoretical_floor = " + fmt_double(c.theoretical_floor) +
             "\nmin_observed_distance = " + fmt_double(c.min_observed_distance) +
             "\nwords_checked = " + std::to_string(c.words_checked) +
             "\nfloor_positive = " + (c.floor_positive ? "true" : "false") +
             "\nvalidates = " + (c.validates ? "true" : "false"));
  } else {
    emit(cfg, "{\"n\":" + std::to_string(c.n) + ",\"l\":" + std::to_string(c.l) +
                  ",\"theoretical_floor\":" + fmt_double(c.theoretical_floor) +
                  ",\"min_observed_distance\":" +
                  fmt_double(c.min_observed_distance) +
                  ",\"words_checked\":" + std::to_string(c.words_checked) +
                  ",\"floor_positive\":" + (c.floor_positive ? "true" : "false") +
                  ",\"validates\":" + (c.validates ? "true" : "false") + "}");
  }
  return c.validates ? 0 : 1;
}

int run_explore(const RunConfig& cfg) {
  const StateGraph g = explore(ChannelFamilyParam(cfg.n), cfg.depth, cfg.grid);
  progress(cfg, "nodes: " + std::to_string(g.nodes.size()) +
                    ", edges: " + std::to_string(g.edges.size()));
  if (cfg.format == "dot") {
    DotOptions opts;
    opts.show_self_loops = !cfg.no_self_loops;
    emit(cfg, export_dot(g, opts));
  } else if (cfg.format == "text") {
    std::string out = "n = " + std::to_string(cfg.n) +
                      "\nmax_depth = " + std::to_string(cfg.depth) +
                      "\nnodes = " + std::to_string(g.nodes.size()) +
                      "\nedges = " + std::to_string(g.edges.size()) + "\n";
    for (const auto& node : g.nodes) {
      out += "node " + std::to_string(node.id) + " (depth " +
             std::to_string(node.depth) + "):\n" +
             matrix_text(node.state.mat(), "  ");
    }
    for (const auto& e : g.edges) {
      out += std::to_string(e.src) + " -" + to_char(e.letter) + "-> " +
             std::to_string(e.dst) + "\n";
    }
    emit(cfg, out);
  } else {
    emit(cfg, export_json(g));
  }
  return 0;
}

int run_verify(const RunConfig& cfg) {
  const RandomSource src(cfg.seed);
  const std::uint64_t small = std::min<std::uint64_t>(cfg.trials, 1000);
  std::vector<CheckReport> reports;
  reports.push_back(check_contraction(cfg.trials, src));
  reports.push_back(check_holder(cfg.trials, src));
  reports.push_back(check_rotation_bounds(cfg.n, small, src));
  reports.push_back(check_power_bound(cfg.n, cfg.s_max, small, src));
  reports.push_back(
      check_word_decomposition_random(cfg.n, 100, cfg.max_len, 10, src));

  std::uint64_t total_failures = 0;
  std::string out = "[";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i > 0) out += ",";
    out += reports[i].to_json();
    total_failures += reports[i].failures;
  }
  out += "]";
  progress(cfg, "checks: " + std::to_string(reports.size()) +
                    ", failures: " + std::to_string(total_failures));
  if (cfg.format == "text") {
    std::string t;
    for (const CheckReport& r : reports) {
      t += r.check_name + ": trials=" + std::to_string(r.trials) +
           " failures=" + std::to_string(r.failures) +
           " worst_margin=" + fmt_double(r.worst_margin) + "\n";
    }
    emit(cfg, t);
  } else {
    emit(cfg, out);
  }
  return total_failures == 0 ? 0 : 1;
}

int run(const RunConfig& cfg) {
  switch (cfg.cmd) {
    case Cmd::channels:
      return run_channels(cfg);
    case Cmd::sync_check:
      return run_sync_check(cfg);
    case Cmd::search:
      return run_search(cfg);
    case Cmd::bound:
      return run_bound(cfg);
    case Cmd::certify:
      return run_certify(cfg);
    case Cmd::explore_cmd:
      return run_explore(cfg);
    case Cmd::verify:
      return run_verify(cfg);
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"qutrit channel-pair synchronization toolkit"};
  app.require_subcommand(1);

  const auto check_word = CLI::Validator(
      [](std::string& s) -> std::string {
        for (char c : s) {
          if (c != 'A' && c != 'a' && c != 'B' && c != 'b') {
            return std::string("letters must be A or B: '") + c + "'";
          }
        }
        return {};
      },
      "WORD", "word");
  auto double_in = [](double lo, bool lo_strict, double hi, bool hi_strict,
                      const std::string& msg) {
    return CLI::Validator(
        [=](std::string& s) -> std::string {
          double v = 0.0;
          try {
            v = std::stod(s);
          } catch (...) {
            return "not a number: " + s;
          }
          const bool lo_ok = lo_strict ? v > lo : v >= lo;
          const bool hi_ok = hi_strict ? v < hi : v <= hi;
          if (!lo_ok || !hi_ok) return msg;
          return {};
        },
        "RANGE", "range");
  };
  const auto strict_epsilon =
      double_in(0.0, true, 0.5, true, "epsilon must be in (0, 0.5)");
  const auto tol_range = double_in(0.0, true, 0.1, false, "tol must be in (0, 0.1]");
  const auto grid_range =
      double_in(1e-12, false, 1e-6, false, "grid must be in [1e-12, 1e-6]");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "json or text")
        ->check(CLI::IsMember({"json", "dot", "text"}));
    sub->add_option("--output", cfg.output, "write result to a file");
    sub->add_flag("--quiet", cfg.quiet, "suppress the progress line on stderr");
  };

  CLI::App* channels = app.add_subcommand("channels", "dump the Kraus factors of A and B_n");
  channels->add_option("--n", cfg.n, "family parameter")->required()->check(CLI::Range(1, 1000000));
  add_common(channels);

  CLI::App* sync_check = app.add_subcommand("sync-check", "test one word for synchronization");
  sync_check->add_option("--n", cfg.n, "family parameter")->required()->check(CLI::Range(1, 1000000));
  sync_check->add_option("--word", cfg.word, "word over {A, B}")->required()->check(check_word);
  sync_check->add_option("--tol", cfg.tol, "probe diameter threshold")->check(tol_range);
  add_common(sync_check);

  CLI::App* search = app.add_subcommand("search", "exhaustive minimal synchronizing word search");
  search->add_option("--n", cfg.n, "family parameter")->required()->check(CLI::Range(1, 1000000));
  search->add_option("--max-len", cfg.max_len, "search envelope")->required()->check(CLI::Range(1, 24));
  search->add_option("--tol", cfg.tol, "probe diameter threshold")->check(tol_range);
  add_common(search);

  CLI::App* bound = app.add_subcommand("bound", "parameters ruling out synchronization up to length l");
  bound->add_option("--l", cfg.l, "word length to rule out")->required()->check(CLI::Range(1, 1000000));
  bound->add_option("--epsilon", cfg.epsilon, "distance budget, in (0, 1/2)")->required()->check(strict_epsilon);
  add_common(bound);

  CLI::App* certify = app.add_subcommand("certify", "brute-force non-synchronization certificate");
  certify->add_option("--n", cfg.n, "family parameter")->required()->check(CLI::Range(1, 1000000));
  certify->add_option("--l", cfg.l, "max word length checked")->required()->check(CLI::Range(0, 20));
  add_common(certify);

  CLI::App* explore_c = app.add_subcommand("explore", "reachable-state graph from |e_1><e_1|");
  explore_c->add_option("--n", cfg.n, "family parameter")->required()->check(CLI::Range(1, 1000000));
  explore_c->add_option("--depth", cfg.depth, "BFS truncation depth")->required()->check(CLI::Range(0, 20));
  explore_c->add_option("--grid", cfg.grid, "canonicalization grid")->check(grid_range);
  explore_c->add_flag("--no-self-loops", cfg.no_self_loops, "omit self-loops from DOT output");
  add_common(explore_c);

  CLI::App* verify = app.add_subcommand("verify", "run the full randomized inequality suite");
  verify->add_option("--n", cfg.n, "family parameter for the rotation checks")->required()->check(CLI::Range(1, 1000000));
  verify->add_option("--trials", cfg.trials, "trials per randomized check")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100000000}));
  verify->add_option("--seed", cfg.seed, "base seed for all checks");
  verify->add_option("--s-max", cfg.s_max, "largest power checked")->check(CLI::Range(0, 10000));
  verify->add_option("--max-len", cfg.max_len, "max random word length")->check(CLI::Range(1, 24));
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // usage errors exit 2; --help exits 0
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (channels->parsed()) cfg.cmd = Cmd::channels;
  if (sync_check->parsed()) cfg.cmd = Cmd::sync_check;
  if (search->parsed()) cfg.cmd = Cmd::search;
  if (bound->parsed()) cfg.cmd = Cmd::bound;
  if (certify->parsed()) cfg.cmd = Cmd::certify;
  if (explore_c->parsed()) cfg.cmd = Cmd::explore_cmd;
  if (verify->parsed()) cfg.cmd = Cmd::verify;

  if (cfg.format == "dot" && cfg.cmd != Cmd::explore_cmd) {
    std::cerr << "--format dot is only valid for the explore subcommand\n";
    return 2;
  }

  try {
    return run(cfg);
  } catch (const qsync::Error& e) {
    std::cout << "{\"error\":\"" << qsync::json_escape(e.name())
              << "\",\"detail\":\"" << qsync::json_escape(e.what()) << "\"}\n";
    return 1;
  } catch (const std::exception& e) {
    std::cout << "{\"error\":\"InvalidArgument\",\"detail\":\""
              << qsync::json_escape(e.what()) << "\"}\n";
    return 1;
  }
}
