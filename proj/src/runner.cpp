#include "rvseg/runner.hpp"

#include <algorithm>

#include "rvseg/errors.hpp"
#include "rvseg/rng.hpp"

namespace rvseg {

namespace {

constexpr std::uint64_t kTagInit = 0x494e4954ULL;       // "INIT"
constexpr std::uint64_t kTagTransform = 0x5452464dULL;  // "TRFM"

struct RunContext {
  SyntheticOracle oracle;
  EmbedTransform tf;
  std::uint64_t init_seed;
};

std::vector<double> referent_identity(const FrameTruth& truth) {
  return truth.referent().identity;
}

RunContext make_context(const FrameTruth& first_frame, const OracleParams& oracle,
                        const PropagationConfig& prop, std::uint64_t run_seed) {
  validate(prop);
  validate(oracle);
  const std::vector<double> expr = referent_identity(first_frame);
  if (static_cast<int>(expr.size()) != prop.embed_dim)
    throw ConfigError("scenario embed_dim does not match propagation embed_dim");
  OracleParams effective = oracle;
  effective.seed = hash_combine(oracle.seed, run_seed);
  return RunContext{
      SyntheticOracle(effective, expr),
      make_embed_transform(prop.embed_transform, prop.embed_dim,
                           hash_key({run_seed, kTagTransform})),
      hash_key({run_seed, kTagInit})};
}

int argmax_mean_score(const std::vector<std::vector<Prediction>>& per_frame,
                      std::size_t num_queries) {
  int best = 0;
  double best_score = -1.0;
  for (std::size_t n = 0; n < num_queries; ++n) {
    double s = 0.0;
    for (const auto& preds : per_frame) s += preds[n].score;
    s /= static_cast<double>(per_frame.size());
    if (s > best_score) {
      best_score = s;
      best = static_cast<int>(n);
    }
  }
  return best;
}

}  // namespace

RunTrace run_online(FrameSource& source, const OracleParams& oracle,
                    const PropagationConfig& prop, std::uint64_t run_seed,
                    const MatchCostWeights& weights) {
  const int total = source.size();
  if (total < 1) throw NoSamplesError("run_online: empty video");
  RunTrace trace;
  trace.window = 1;
  trace.seed = run_seed;

  const FrameTruth& first = source.frame(0);
  RunContext ctx = make_context(first, oracle, prop, run_seed);
  std::vector<QueryState> states = init_queries(prop, ctx.init_seed);

  for (int t = 0; t < total; ++t) {
    const FrameTruth& truth = source.frame(t);
    const FrameView view = frame_view(truth);
    const std::vector<Prediction> preds = ctx.oracle.detect(view, states);
    const int sel = select_query(preds);
    const ReferentTruth gt = referent_truth(truth);

    FrameRecord rec;
    rec.frame_index = t;
    rec.clip_index = t;
    rec.input_queries = states;
    rec.predictions = preds;
    rec.selected_index = sel;
    rec.empty_query = is_empty_query(preds[static_cast<std::size_t>(sel)]);
    rec.assignment = best_match_frame(preds, gt, weights);
    rec.handoff_after = t + 1 < total;
    trace.clip_assignments.push_back(rec.assignment);
    trace.output_masks.push_back(preds[static_cast<std::size_t>(sel)].mask);

    if (t + 1 < total)
      states = propagate(preds, states, prop, ctx.tf, ctx.init_seed);
    trace.frames.push_back(std::move(rec));
  }
  return trace;
}

RunTrace run_online(const ScenarioSpec& spec, const OracleParams& oracle,
                    const PropagationConfig& prop, std::uint64_t run_seed,
                    const MatchCostWeights& weights) {
  VectorFrameSource source(generate(spec));
  return run_online(source, oracle, prop, run_seed, weights);
}

RunTrace run_semi_online(FrameSource& source, const OracleParams& oracle,
                         const PropagationConfig& prop, int window,
                         std::uint64_t run_seed,
                         const MatchCostWeights& weights) {
  if (window < 1) throw ConfigError("window must be >= 1");
  const int total = source.size();
  if (total < 1) throw NoSamplesError("run_semi_online: empty video");
  RunTrace trace;
  trace.window = window;
  trace.seed = run_seed;

  const FrameTruth& first = source.frame(0);
  RunContext ctx = make_context(first, oracle, prop, run_seed);
  std::vector<QueryState> states = init_queries(prop, ctx.init_seed);

  int clip_index = 0;
  for (int begin = 0; begin < total; begin += window, ++clip_index) {
    const int end = std::min(begin + window, total);
    const int clip_len = end - begin;
    const std::size_t n_queries = states.size();

    // The clip's input queries are repeated on every frame: detection
    // within a clip is independent given those queries.
    std::vector<std::vector<Prediction>> per_frame;
    std::vector<ReferentTruth> gts;
    per_frame.reserve(static_cast<std::size_t>(clip_len));
    for (int t = begin; t < end; ++t) {
      const FrameTruth& truth = source.frame(t);
      per_frame.push_back(ctx.oracle.detect(frame_view(truth), states));
      gts.push_back(referent_truth(truth));
    }

    // Rows are trajectories: query n observed on each clip frame.
    std::vector<std::vector<Prediction>> trajectories(n_queries);
    for (std::size_t n = 0; n < n_queries; ++n)
      for (int i = 0; i < clip_len; ++i)
        trajectories[n].push_back(per_frame[static_cast<std::size_t>(i)][n]);

    const Assignment clip_assignment = best_match_sequence(trajectories, gts, weights);
    trace.clip_assignments.push_back(clip_assignment);
    const int out_traj = argmax_mean_score(per_frame, n_queries);

    for (int i = 0; i < clip_len; ++i) {
      const auto& preds = per_frame[static_cast<std::size_t>(i)];
      FrameRecord rec;
      rec.frame_index = begin + i;
      rec.clip_index = clip_index;
      rec.input_queries = states;
      rec.predictions = preds;
      rec.selected_index = out_traj;
      rec.empty_query = is_empty_query(preds[static_cast<std::size_t>(out_traj)]);
      rec.assignment = best_match_frame(preds, gts[static_cast<std::size_t>(i)], weights);
      rec.handoff_after = (i == clip_len - 1) && end < total;
      trace.output_masks.push_back(preds[static_cast<std::size_t>(out_traj)].mask);
      trace.frames.push_back(std::move(rec));
    }

    // Only the high-score query of the clip's last frame crosses the clip
    // boundary.
    if (end < total)
      states = propagate(per_frame.back(), states, prop, ctx.tf, ctx.init_seed);
  }
  return trace;
}

RunTrace run_semi_online(const ScenarioSpec& spec, const OracleParams& oracle,
                         const PropagationConfig& prop, int window,
                         std::uint64_t run_seed,
                         const MatchCostWeights& weights) {
  VectorFrameSource source(generate(spec));
  return run_semi_online(source, oracle, prop, window, run_seed, weights);
}

MetricsReport trace_metrics(const RunTrace& trace,
                            std::span<const FrameTruth> truths) {
  if (trace.output_masks.size() != truths.size())
    throw ShapeMismatchError("trace_metrics: trace vs truth length");
  std::vector<Mask> gt;
  gt.reserve(truths.size());
  for (const auto& t : truths) gt.push_back(referent_truth(t).mask);
  const int tol = truths.empty()
                      ? 1
                      : default_boundary_tolerance(truths[0].width, truths[0].height);
  return evaluate_masks(trace.output_masks, gt, tol);
}

std::vector<AblationAxis> default_ablation_axes(const PropagationConfig& base) {
  std::vector<AblationAxis> axes;

  AblationAxis update;
  update.name = "update-flags";
  for (const auto& [label, uq, up] :
       std::initializer_list<std::tuple<const char*, bool, bool>>{
           {"no-update", false, false},
           {"query-update", true, false},
           {"query+position-update", true, true}}) {
    PropagationConfig cfg = base;
    cfg.method = PropagationMethod::Ours;
    cfg.update_query = uq;
    cfg.update_position = up;
    update.variants.push_back({label, cfg});
  }
  axes.push_back(std::move(update));

  AblationAxis method;
  method.name = "method";
  for (const auto& [label, m] :
       std::initializer_list<std::pair<const char*, PropagationMethod>>{
           {"w/o-propagation", PropagationMethod::NoPropagation},
           {"concatenation", PropagationMethod::Concatenation},
           {"fixed", PropagationMethod::Fixed},
           {"ours", PropagationMethod::Ours}}) {
    PropagationConfig cfg = base;
    cfg.method = m;
    method.variants.push_back({label, cfg});
  }
  axes.push_back(std::move(method));

  AblationAxis topk;
  topk.name = "top-k";
  for (int k : {4, 3, 2, 1}) {
    PropagationConfig cfg = base;
    cfg.method = PropagationMethod::Ours;
    cfg.top_k = k;
    topk.variants.push_back({"top-" + std::to_string(k), cfg});
  }
  axes.push_back(std::move(topk));

  AblationAxis initial;
  initial.name = "initial-queries";
  for (int n : {1, 3, 5, 8}) {
    PropagationConfig cfg = base;
    cfg.method = PropagationMethod::Ours;
    cfg.top_k = 1;
    cfg.initial_queries = n;
    initial.variants.push_back({std::to_string(n), cfg});
  }
  axes.push_back(std::move(initial));

  return axes;
}

AblationTable run_ablation(const AblationAxis& axis,
                           std::span<const std::string> suites,
                           std::span<const std::uint64_t> seeds,
                           const OracleParams& oracle, int window,
                           const MatchCostWeights& weights) {
  AblationTable table;
  table.axis = axis.name;
  for (const auto& variant : axis.variants) {
    validate(variant.prop);
    AblationRow row;
    row.label = variant.label;
    double jf = 0.0;
    double j = 0.0;
    double f = 0.0;
    int runs = 0;
    for (const auto& suite : suites) {
      for (std::uint64_t seed : seeds) {
        const ScenarioSpec spec = make_builtin_scenario(suite, seed);
        const std::vector<FrameTruth> truths = generate(spec);
        VectorFrameSource source(truths);
        const RunTrace trace =
            window <= 1 ? run_online(source, oracle, variant.prop, seed, weights)
                        : run_semi_online(source, oracle, variant.prop, window,
                                          seed, weights);
        const MetricsReport report = trace_metrics(trace, truths);
        jf += report.jf_mean;
        j += report.j_mean;
        f += report.f_mean;
        ++runs;
      }
    }
    if (runs > 0) {
      row.jf_mean = jf / runs;
      row.j_mean = j / runs;
      row.f_mean = f / runs;
    }
    row.runs = runs;
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace rvseg
