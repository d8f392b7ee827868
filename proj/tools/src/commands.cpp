#include "oet_cli/commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <thread>

#include "oet/config.hpp"
#include "oet/diagnostics.hpp"
#include "oet/error.hpp"
#include "oet/metrics.hpp"
#include "oet/sequence_io.hpp"
#include "oet/synth.hpp"
#include "oet/tracker.hpp"

namespace oet::cli {

namespace {

constexpr const char* kPrecedenceNote =
    "Settings are resolved as: command-line flags, then the --config file, "
    "then built-in defaults.";

struct TrackArgs {
  std::string sequence_dir;
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::string init;
  std::optional<int> workers;
  bool verbose = false;
};

struct EvalArgs {
  std::string results_path;
  std::string gt_path;
  std::string report_path;
};

struct SynthArgs {
  std::string spec_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

struct CheckArgs {
  std::uint64_t seed = 7;
  bool verbose = false;
  bool flip_e2_sign = false;
};

// --workers, then OET_WORKERS, then the hardware thread count.
int resolve_workers(const std::optional<int>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("OET_WORKERS")) {
    try {
      return std::stoi(env);
    } catch (const std::exception&) {
      throw ConfigError("workers", std::string("OET_WORKERS is not an integer: ") + env);
    }
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

BoundingBox parse_init_box(const std::string& text) {
  const auto boxes = parse_groundtruth(text);
  if (boxes.size() != 1 || !boxes.front().valid()) {
    throw InvalidInput("--init expects x,y,w,h with positive width and height");
  }
  return boxes.front();
}

int cmd_track(const TrackArgs& a, std::ostream& out) {
  TrackerConfig cfg;
  if (!a.config_path.empty()) cfg = load_config(a.config_path);
  if (a.seed) cfg.seed = *a.seed;
  cfg.workers = resolve_workers(a.workers);
  cfg.validate();

  const LoadedSequence seq = load_sequence(a.sequence_dir);
  BoundingBox init;
  if (!a.init.empty()) {
    init = parse_init_box(a.init);
  } else if (seq.manifest.ground_truth && !seq.manifest.ground_truth->empty()) {
    init = seq.manifest.ground_truth->front();
  } else {
    throw InvalidInput(
        "no initial box: pass --init x,y,w,h or provide groundtruth_rect.txt");
  }

  const auto start = std::chrono::steady_clock::now();
  const TrackResult result = track_sequence(seq.frames, init, cfg);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_results(a.out_path, result.boxes);

  if (a.verbose) {
    for (size_t t = 0; t < result.frames.size(); ++t) {
      const FrameReport& f = result.frames[t];
      char line[160];
      std::snprintf(line, sizeof line, "frame %4zu  box %.2f,%.2f,%.2f,%.2f  psi %.6f  d %d%s%s\n",
                    t + 1, f.box.x, f.box.y, f.box.w, f.box.h, f.psi, f.subspace_dim,
                    f.relearned ? "  relearn" : "", f.localization_failed ? "  FAILED" : "");
      out << line;
    }
  }
  char summary[256];
  std::snprintf(summary, sizeof summary,
                "frames = %zu, mean psi = %.6f, relearns = %d, failures = %d, "
                "wall time = %.2f s\n",
                result.boxes.size(), result.mean_psi, result.relearn_count,
                result.failure_count, seconds);
  out << summary;
  return kExitOk;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const auto results = load_groundtruth(a.results_path);
  const auto truth = load_groundtruth(a.gt_path);
  const EvaluationReport report = evaluate(results, truth);
  write_report(a.report_path, report);
  char line[96];
  std::snprintf(line, sizeof line, "precision@20 = %.3f, auc = %.3f\n",
                report.precision_at_20, report.auc);
  out << line;
  return kExitOk;
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  SynthSpec spec;
  if (!a.spec_path.empty()) spec = load_synth_spec(a.spec_path);
  if (a.seed) spec.seed = *a.seed;
  spec.validate();
  const SyntheticSequence seq = generate_sequence(spec);
  write_sequence(a.out_dir, seq.frames, seq.ground_truth);
  out << "wrote " << seq.frames.size() << " frames to " << a.out_dir << "\n";
  return kExitOk;
}

int cmd_solver_check(const CheckArgs& a, std::ostream& out) {
  DiagnosticOptions opts;
  opts.seed = a.seed;
  opts.trace = a.verbose ? &out : nullptr;
  opts.e2_formula = a.flip_e2_sign ? E2Formula::kPrinted : E2Formula::kDerived;
  bool all = true;
  for (const DiagnosticResult& r : run_solver_diagnostics(opts)) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    all = all && r.passed;
  }
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Orthogonal-embedding visual tracker"};
  app.footer(kPrecedenceNote);
  app.require_subcommand(1);

  TrackArgs track;
  auto* t = app.add_subcommand("track", "Track a target through an image sequence");
  t->footer(kPrecedenceNote);
  t->add_option("sequence_dir", track.sequence_dir, "Directory with img/ and groundtruth_rect.txt")
      ->required();
  t->add_option("--config", track.config_path, "Tracker config file (key = value)");
  t->add_option("--out", track.out_path, "Result file, one x,y,w,h line per frame")->required();
  t->add_option("--seed", track.seed, "RNG seed, overrides the config file");
  t->add_option("--init", track.init, "Initial box x,y,w,h; defaults to ground-truth line 1");
  t->add_option("--workers", track.workers,
                "Scoring threads; falls back to OET_WORKERS, then the CPU count")
      ->check(CLI::PositiveNumber);
  t->add_flag("--verbose", track.verbose, "Print one line per frame");

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Score results against ground truth");
  e->add_option("results", eval.results_path, "Result file")->required();
  e->add_option("groundtruth", eval.gt_path, "Ground-truth file")->required();
  e->add_option("--out", eval.report_path, "Report path; curve CSVs are written beside it")
      ->required();

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Render a synthetic sequence");
  s->footer(kPrecedenceNote);
  s->add_option("spec", synth.spec_path, "Sequence spec file; defaults to the reference fixture");
  s->add_option("--out", synth.out_dir, "Output sequence directory")->required();
  s->add_option("--seed", synth.seed, "RNG seed, overrides the spec file");

  CheckArgs check;
  auto* c = app.add_subcommand("solver-check", "Run the seeded subspace-solver self-checks");
  c->add_option("--seed", check.seed, "RNG seed")->capture_default_str();
  c->add_flag("--verbose", check.verbose, "Print per-iteration objective traces");
  // Mutation hook for tests: swaps in the opposite-sign E2 update.
  c->add_flag("--flip-e2-sign", check.flip_e2_sign)->group("");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    err << "oet: " << ex.what() << "\n";
    if (!app.get_subcommands().empty()) {
      err << app.get_subcommands().front()->help();
    } else {
      err << app.help();
    }
    return kExitError;
  }

  try {
    if (t->parsed()) return cmd_track(track, out);
    if (e->parsed()) return cmd_eval(eval, out);
    if (s->parsed()) return cmd_synth(synth, out);
    return cmd_solver_check(check, out);
  } catch (const std::exception& ex) {
    err << "oet: " << ex.what() << "\n";
    return kExitError;
  }
}

}  // namespace oet::cli
