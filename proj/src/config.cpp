#include "rvseg/config.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>

#include <json.hpp>

#include "rvseg/errors.hpp"

namespace rvseg {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// All emitted floats are normalized to 6 significant digits so reruns are
// byte-identical.
double round6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return std::strtod(buf, nullptr);
}

json round6_json(double v) { return json(round6(v)); }

json vector_to_json(const std::vector<double>& v) {
  json arr = json::array();
  for (double x : v) arr.push_back(round6_json(x));
  return arr;
}

json box_to_json(const Box& b) {
  return json::array({round6_json(b.cx), round6_json(b.cy), round6_json(b.w),
                      round6_json(b.h)});
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

json parse_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("Io", "cannot write " + path.string());
  out << text;
}

// --- scenario serialization ---------------------------------------------

ShapeKind shape_from_string(const std::string& s) {
  if (s == "rectangle") return ShapeKind::Rectangle;
  if (s == "ellipse") return ShapeKind::Ellipse;
  throw ConfigError("unknown shape: " + s);
}

std::string shape_to_string(ShapeKind k) {
  return k == ShapeKind::Rectangle ? "rectangle" : "ellipse";
}

ObjectScript object_from_json(const json& j) {
  ObjectScript o;
  o.id = get_or<int>(j, "id", 0);
  o.shape = shape_from_string(get_or<std::string>(j, "shape", "rectangle"));
  if (!j.contains("keyframes") || !j.at("keyframes").is_array())
    throw ConfigError("object requires a keyframes array");
  for (const auto& kj : j.at("keyframes")) {
    Keyframe k;
    k.frame = get_or<int>(kj, "frame", 0);
    k.cx = get_or<double>(kj, "cx", 0.0);
    k.cy = get_or<double>(kj, "cy", 0.0);
    k.w = get_or<double>(kj, "w", 0.0);
    k.h = get_or<double>(kj, "h", 0.0);
    o.keyframes.push_back(k);
  }
  if (j.contains("visible")) {
    for (const auto& iv : j.at("visible")) {
      if (!iv.is_array() || iv.size() != 2)
        throw ConfigError("visible intervals must be [begin, end) pairs");
      o.visible.push_back(FrameInterval{iv[0].get<int>(), iv[1].get<int>()});
    }
  }
  if (j.contains("identity")) {
    const json& ij = j.at("identity");
    const std::string mode = get_or<std::string>(ij, "mode", "seeded");
    if (mode == "seeded") {
      o.identity.mode = IdentitySpec::Mode::Seeded;
    } else if (mode == "near") {
      o.identity.mode = IdentitySpec::Mode::Near;
      o.identity.of_id = get_or<int>(ij, "of", -1);
      o.identity.cosine = get_or<double>(ij, "cos", 0.95);
    } else if (mode == "explicit") {
      o.identity.mode = IdentitySpec::Mode::Explicit;
      o.identity.values = get_or<std::vector<double>>(ij, "values", {});
    } else {
      throw ConfigError("unknown identity mode: " + mode);
    }
  }
  return o;
}

json object_to_json(const ObjectScript& o) {
  json j;
  j["id"] = o.id;
  j["shape"] = shape_to_string(o.shape);
  json kfs = json::array();
  for (const auto& k : o.keyframes) {
    json kj;
    kj["frame"] = k.frame;
    kj["cx"] = round6_json(k.cx);
    kj["cy"] = round6_json(k.cy);
    kj["w"] = round6_json(k.w);
    kj["h"] = round6_json(k.h);
    kfs.push_back(kj);
  }
  j["keyframes"] = kfs;
  json vis = json::array();
  for (const auto& iv : o.visible) vis.push_back(json::array({iv.begin, iv.end}));
  j["visible"] = vis;
  json ij;
  switch (o.identity.mode) {
    case IdentitySpec::Mode::Seeded:
      ij["mode"] = "seeded";
      break;
    case IdentitySpec::Mode::Near:
      ij["mode"] = "near";
      ij["of"] = o.identity.of_id;
      ij["cos"] = round6_json(o.identity.cosine);
      break;
    case IdentitySpec::Mode::Explicit:
      ij["mode"] = "explicit";
      ij["values"] = vector_to_json(o.identity.values);
      break;
  }
  j["identity"] = ij;
  return j;
}

ScenarioSpec scenario_from_json(const json& j) {
  ScenarioSpec spec;
  spec.width = get_or<int>(j, "width", 48);
  spec.height = get_or<int>(j, "height", 48);
  spec.num_frames = get_or<int>(j, "num_frames", 1);
  if (!j.contains("referent_id"))
    throw ConfigError("scenario requires referent_id");
  spec.referent_id = j.at("referent_id").get<int>();
  spec.seed = get_or<std::uint64_t>(j, "seed", 0);
  spec.embed_dim = get_or<int>(j, "embed_dim", 256);
  if (!j.contains("objects") || !j.at("objects").is_array())
    throw ConfigError("scenario requires an objects array");
  for (const auto& oj : j.at("objects")) spec.objects.push_back(object_from_json(oj));
  return spec;
}

json scenario_to_json(const ScenarioSpec& spec) {
  json j;
  j["width"] = spec.width;
  j["height"] = spec.height;
  j["num_frames"] = spec.num_frames;
  j["referent_id"] = spec.referent_id;
  j["seed"] = spec.seed;
  j["embed_dim"] = spec.embed_dim;
  json objs = json::array();
  for (const auto& o : spec.objects) objs.push_back(object_to_json(o));
  j["objects"] = objs;
  return j;
}

// --- run config serialization --------------------------------------------

OracleParams oracle_from_json(const json& j) {
  OracleParams p;
  p.score_sharpness = get_or<double>(j, "score_sharpness", p.score_sharpness);
  p.prior_gain = get_or<double>(j, "prior_gain", p.prior_gain);
  p.box_noise_sigma = get_or<double>(j, "box_noise_sigma", p.box_noise_sigma);
  p.distractor_confusion =
      get_or<double>(j, "distractor_confusion", p.distractor_confusion);
  p.seed = get_or<std::uint64_t>(j, "seed", p.seed);
  return p;
}

json oracle_to_json(const OracleParams& p) {
  json j;
  j["score_sharpness"] = round6_json(p.score_sharpness);
  j["prior_gain"] = round6_json(p.prior_gain);
  j["box_noise_sigma"] = round6_json(p.box_noise_sigma);
  j["distractor_confusion"] = round6_json(p.distractor_confusion);
  j["seed"] = p.seed;
  return j;
}

PropagationConfig propagation_from_json(const json& j) {
  PropagationConfig c;
  c.method = propagation_method_from_string(
      get_or<std::string>(j, "method", to_string(c.method)));
  c.top_k = get_or<int>(j, "top_k", c.top_k);
  c.update_query = get_or<bool>(j, "update_query", c.update_query);
  c.update_position = get_or<bool>(j, "update_position", c.update_position);
  c.initial_queries = get_or<int>(j, "initial_queries", c.initial_queries);
  c.embed_dim = get_or<int>(j, "embed_dim", c.embed_dim);
  c.embed_transform = get_or<std::string>(j, "embed_transform", c.embed_transform);
  return c;
}

json propagation_to_json(const PropagationConfig& c) {
  json j;
  j["method"] = to_string(c.method);
  j["top_k"] = c.top_k;
  j["update_query"] = c.update_query;
  j["update_position"] = c.update_position;
  j["initial_queries"] = c.initial_queries;
  j["embed_dim"] = c.embed_dim;
  j["embed_transform"] = c.embed_transform;
  return j;
}

MatchCostWeights weights_from_json(const json& j) {
  MatchCostWeights w;
  w.lambda_cls = get_or<double>(j, "lambda_cls", w.lambda_cls);
  w.lambda_box = get_or<double>(j, "lambda_box", w.lambda_box);
  w.lambda_mask = get_or<double>(j, "lambda_mask", w.lambda_mask);
  w.focal_alpha = get_or<double>(j, "focal_alpha", w.focal_alpha);
  w.focal_gamma = get_or<double>(j, "focal_gamma", w.focal_gamma);
  w.dice_eps = get_or<double>(j, "dice_eps", w.dice_eps);
  return w;
}

json weights_to_json(const MatchCostWeights& w) {
  json j;
  j["lambda_cls"] = round6_json(w.lambda_cls);
  j["lambda_box"] = round6_json(w.lambda_box);
  j["lambda_mask"] = round6_json(w.lambda_mask);
  j["focal_alpha"] = round6_json(w.focal_alpha);
  j["focal_gamma"] = round6_json(w.focal_gamma);
  j["dice_eps"] = round6_json(w.dice_eps);
  return j;
}

// Snapshot embedded in every result file. Window is normalized to its
// effective value so window 0 and window 1 runs emit identical files.
json config_snapshot(const RunConfig& config) {
  json j;
  json sc;
  if (!config.scenario.suite.empty()) sc["suite"] = config.scenario.suite;
  if (!config.scenario.path.empty()) sc["path"] = config.scenario.path;
  j["scenario"] = sc;
  j["oracle"] = oracle_to_json(config.oracle);
  j["propagation"] = propagation_to_json(config.propagation);
  j["weights"] = weights_to_json(config.weights);
  j["window"] = std::max(1, config.window);
  return j;
}

json metrics_to_json(const MetricsReport& r) {
  json j;
  j["j_mean"] = round6_json(r.j_mean);
  j["f_mean"] = round6_json(r.f_mean);
  j["jf_mean"] = round6_json(r.jf_mean);
  j["overall_iou"] = round6_json(r.overall_iou);
  j["mean_iou"] = round6_json(r.mean_iou);
  json prec;
  for (const auto& [k, v] : r.precision_at) {
    char key[16];
    std::snprintf(key, sizeof(key), "%.1f", k);
    prec[key] = round6_json(v);
  }
  j["precision_at"] = prec;
  j["per_frame_j"] = vector_to_json(r.per_frame_j);
  j["per_frame_f"] = vector_to_json(r.per_frame_f);
  return j;
}

json assignment_to_json(const Assignment& a) {
  json j;
  j["positive_index"] = a.positive_index;
  j["cost"] = round6_json(a.cost);
  json terms;
  for (const auto& [k, v] : a.per_term_costs) terms[k] = round6_json(v);
  j["terms"] = terms;
  return j;
}

json trace_to_json(const RunTrace& trace, const json& snapshot) {
  json j;
  j["config"] = snapshot;
  j["seed"] = trace.seed;
  j["window"] = trace.window;
  json frames = json::array();
  for (const auto& f : trace.frames) {
    json fj;
    fj["frame"] = f.frame_index;
    fj["clip"] = f.clip_index;
    fj["selected"] = f.selected_index;
    fj["empty_query"] = f.empty_query;
    fj["handoff_after"] = f.handoff_after;
    fj["assignment"] = assignment_to_json(f.assignment);
    json queries = json::array();
    for (const auto& q : f.input_queries) {
      json qj;
      qj["origin"] = q.origin == QueryOrigin::Learned ? "learned" : "propagated";
      qj["base_box"] = box_to_json(q.base_box);
      qj["content"] = vector_to_json(q.content);
      qj["position"] = vector_to_json(q.position);
      queries.push_back(qj);
    }
    fj["queries"] = queries;
    json preds = json::array();
    for (const auto& p : f.predictions) {
      json pj;
      pj["box"] = box_to_json(p.box);
      pj["score"] = round6_json(p.score);
      pj["mask_rle"] = rle_encode(p.mask);
      pj["output_embedding"] = vector_to_json(p.output_embedding);
      preds.push_back(pj);
    }
    fj["predictions"] = preds;
    frames.push_back(fj);
  }
  j["frames"] = frames;
  json clips = json::array();
  for (const auto& a : trace.clip_assignments) clips.push_back(assignment_to_json(a));
  j["clip_assignments"] = clips;
  json masks = json::array();
  for (const auto& m : trace.output_masks) masks.push_back(rle_encode(m));
  j["output_masks"] = masks;
  return j;
}

std::string table_to_csv(const AblationTable& table) {
  std::string out = "label,jf_mean,j_mean,f_mean,runs\n";
  char line[160];
  for (const auto& row : table.rows) {
    std::snprintf(line, sizeof(line), "%s,%.6g,%.6g,%.6g,%d\n", row.label.c_str(),
                  round6(row.jf_mean), round6(row.j_mean), round6(row.f_mean),
                  row.runs);
    out += line;
  }
  return out;
}

json table_to_json(const AblationTable& table, const json& snapshot,
                   const AblationSpec& ab, std::span<const std::uint64_t> seeds) {
  json j;
  j["config"] = snapshot;
  j["axis"] = table.axis;
  j["suites"] = ab.suites;
  j["seeds"] = json(std::vector<std::uint64_t>(seeds.begin(), seeds.end()));
  json rows = json::array();
  for (const auto& row : table.rows) {
    json rj;
    rj["label"] = row.label;
    rj["jf_mean"] = round6_json(row.jf_mean);
    rj["j_mean"] = round6_json(row.j_mean);
    rj["f_mean"] = round6_json(row.f_mean);
    rj["runs"] = row.runs;
    rows.push_back(rj);
  }
  j["rows"] = rows;
  return j;
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  if (!j.contains("scenario"))
    throw ConfigError("config requires a scenario section");
  const json& sc = j.at("scenario");
  c.scenario.suite = get_or<std::string>(sc, "suite", "");
  c.scenario.path = get_or<std::string>(sc, "path", "");
  if (j.contains("oracle")) c.oracle = oracle_from_json(j.at("oracle"));
  if (j.contains("propagation"))
    c.propagation = propagation_from_json(j.at("propagation"));
  if (j.contains("weights")) c.weights = weights_from_json(j.at("weights"));
  c.window = get_or<int>(j, "window", 0);
  c.seeds = get_or<std::vector<std::uint64_t>>(j, "seeds", {0});
  c.output_dir = get_or<std::string>(j, "output_dir", "out");
  c.dump_masks = get_or<bool>(j, "dump_masks", false);
  if (j.contains("ablation")) {
    const json& ab = j.at("ablation");
    c.ablation.suites = get_or<std::vector<std::string>>(ab, "suites",
                                                         c.ablation.suites);
    c.ablation.axes = get_or<std::vector<std::string>>(ab, "axes", c.ablation.axes);
  }
  return c;
}

std::string frame_file_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%04d.rle", index);
  return buf;
}

ScenarioSpec resolve_scenario(const RunConfig& config, std::uint64_t seed) {
  if (!config.scenario.suite.empty())
    return make_builtin_scenario(config.scenario.suite, seed);
  return load_scenario(config.scenario.path);
}

}  // namespace

void validate(const RunConfig& config) {
  const bool has_suite = !config.scenario.suite.empty();
  const bool has_path = !config.scenario.path.empty();
  if (has_suite == has_path)
    throw ConfigError("scenario must name exactly one of suite or path");
  if (has_suite) {
    const auto names = builtin_suite_names();
    if (std::find(names.begin(), names.end(), config.scenario.suite) == names.end())
      throw ConfigError("unknown builtin suite: " + config.scenario.suite);
  }
  validate(config.oracle);
  validate(config.propagation);
  validate(config.weights);
  if (config.window < 0) throw ConfigError("window must be >= 0");
  if (config.seeds.empty()) throw ConfigError("seeds must be non-empty");
  if (config.output_dir.empty()) throw ConfigError("output_dir must be set");
  for (const auto& axis : config.ablation.axes) {
    static const std::vector<std::string> known = {"update-flags", "method",
                                                   "top-k", "initial-queries"};
    if (std::find(known.begin(), known.end(), axis) == known.end())
      throw ConfigError("unknown ablation axis: " + axis);
  }
  for (const auto& suite : config.ablation.suites) {
    const auto names = builtin_suite_names();
    if (std::find(names.begin(), names.end(), suite) == names.end())
      throw ConfigError("unknown ablation suite: " + suite);
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return run_config_from_json(parse_file(path));
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  ScenarioSpec spec = scenario_from_json(parse_file(path));
  try {
    validate(spec);
  } catch (const BadScriptError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return spec;
}

void save_scenario(const ScenarioSpec& spec, const std::filesystem::path& path) {
  write_text(path, scenario_to_json(spec).dump(2) + "\n");
}

namespace {

void apply_overrides(RunConfig& config, const CliOverrides& ov) {
  if (ov.seed) config.seeds = {*ov.seed};
  if (ov.output_dir) config.output_dir = *ov.output_dir;
  if (ov.window) config.window = *ov.window;
  if (ov.suite) {
    config.scenario.suite = *ov.suite;
    config.scenario.path.clear();
  }
}

RunTrace execute(const RunConfig& config, const ScenarioSpec& spec,
                 FrameSource& source, std::uint64_t seed) {
  if (config.propagation.embed_dim != spec.embed_dim)
    throw ConfigError("propagation embed_dim does not match scenario embed_dim");
  if (config.window <= 1)
    return run_online(source, config.oracle, config.propagation, seed,
                      config.weights);
  return run_semi_online(source, config.oracle, config.propagation,
                         config.window, seed, config.weights);
}

}  // namespace

int cmd_run(const std::filesystem::path& config_path, const CliOverrides& ov) {
  RunConfig config;
  try {
    config = load_run_config(config_path);
    apply_overrides(config, ov);
    validate(config);
    if (!config.scenario.path.empty()) load_scenario(config.scenario.path);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  try {
    const json snapshot = config_snapshot(config);
    const fs::path out_dir(config.output_dir);
    double jf_sum = 0.0;
    json aggregate;
    aggregate["config"] = snapshot;
    json per_seed = json::array();
    for (std::uint64_t seed : config.seeds) {
      const ScenarioSpec spec = resolve_scenario(config, seed);
      const std::vector<FrameTruth> truths = generate(spec);
      VectorFrameSource source(truths);
      const RunTrace trace = execute(config, spec, source, seed);
      const MetricsReport report = trace_metrics(trace, truths);

      const fs::path seed_dir = out_dir / ("seed_" + std::to_string(seed));
      write_text(seed_dir / "trace.json",
                 trace_to_json(trace, snapshot).dump(2) + "\n");
      json mj;
      mj["config"] = snapshot;
      mj["seed"] = seed;
      mj["metrics"] = metrics_to_json(report);
      write_text(seed_dir / "metrics.json", mj.dump(2) + "\n");

      if (config.dump_masks) {
        for (std::size_t t = 0; t < trace.output_masks.size(); ++t) {
          write_text(seed_dir / "pred" / frame_file_name(static_cast<int>(t)),
                     rle_encode(trace.output_masks[t]) + "\n");
          write_text(seed_dir / "gt" / frame_file_name(static_cast<int>(t)),
                     rle_encode(referent_truth(truths[t]).mask) + "\n");
        }
      }

      json summary;
      summary["seed"] = seed;
      summary["jf_mean"] = round6_json(report.jf_mean);
      summary["j_mean"] = round6_json(report.j_mean);
      summary["f_mean"] = round6_json(report.f_mean);
      per_seed.push_back(summary);
      jf_sum += report.jf_mean;
      std::cout << "seed " << seed << ": J&F " << round6(report.jf_mean) << "\n";
    }
    aggregate["per_seed"] = per_seed;
    aggregate["jf_mean"] =
        round6_json(jf_sum / static_cast<double>(config.seeds.size()));
    write_text(out_dir / "metrics.json", aggregate.dump(2) + "\n");
  } catch (const Error& e) {
    std::cerr << "run error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int cmd_ablate(const std::filesystem::path& config_path, const CliOverrides& ov) {
  RunConfig config;
  try {
    config = load_run_config(config_path);
    apply_overrides(config, ov);
    validate(config);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  try {
    const json snapshot = config_snapshot(config);
    const fs::path out_dir(config.output_dir);
    const auto axes = default_ablation_axes(config.propagation);
    for (const auto& axis_name : config.ablation.axes) {
      const auto it = std::find_if(axes.begin(), axes.end(),
                                   [&](const AblationAxis& a) {
                                     return a.name == axis_name;
                                   });
      if (it == axes.end()) continue;
      const AblationTable table =
          run_ablation(*it, config.ablation.suites, config.seeds, config.oracle,
                       std::max(1, config.window), config.weights);
      write_text(out_dir / ("ablation_" + axis_name + ".json"),
                 table_to_json(table, snapshot, config.ablation, config.seeds)
                         .dump(2) +
                     "\n");
      write_text(out_dir / ("ablation_" + axis_name + ".csv"),
                 table_to_csv(table));
      std::cout << "axis " << axis_name << ": " << table.rows.size()
                << " rows\n";
    }
  } catch (const Error& e) {
    std::cerr << "ablation error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int cmd_eval(const std::filesystem::path& pred_dir,
             const std::filesystem::path& gt_dir,
             const std::optional<std::filesystem::path>& out_file) {
  std::vector<Mask> pred;
  std::vector<Mask> gt;
  try {
    auto list_rle = [](const fs::path& dir) {
      std::vector<fs::path> files;
      if (!fs::is_directory(dir))
        throw ConfigError("not a directory: " + dir.string());
      for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".rle") files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      return files;
    };
    const auto pred_files = list_rle(pred_dir);
    const auto gt_files = list_rle(gt_dir);
    if (pred_files.empty()) throw ConfigError("no .rle masks in " + pred_dir.string());
    if (pred_files.size() != gt_files.size())
      throw ConfigError("prediction and ground-truth mask counts differ");
    for (std::size_t i = 0; i < pred_files.size(); ++i) {
      if (pred_files[i].filename() != gt_files[i].filename())
        throw ConfigError("mask file sets do not match: " +
                          pred_files[i].filename().string() + " vs " +
                          gt_files[i].filename().string());
      std::ifstream pin(pred_files[i]);
      std::ifstream gin(gt_files[i]);
      std::string ptext((std::istreambuf_iterator<char>(pin)),
                        std::istreambuf_iterator<char>());
      std::string gtext((std::istreambuf_iterator<char>(gin)),
                        std::istreambuf_iterator<char>());
      pred.push_back(rle_decode(ptext));
      gt.push_back(rle_decode(gtext));
    }
  } catch (const Error& e) {
    std::cerr << "eval input error: " << e.what() << "\n";
    return 2;
  }
  try {
    const int tol = default_boundary_tolerance(gt[0].width(), gt[0].height());
    const MetricsReport report = evaluate_masks(pred, gt, tol);
    json j;
    j["pred_dir"] = pred_dir.string();
    j["gt_dir"] = gt_dir.string();
    j["boundary_tolerance_px"] = tol;
    j["metrics"] = metrics_to_json(report);
    const std::string text = j.dump(2) + "\n";
    if (out_file) {
      write_text(*out_file, text);
    } else {
      std::cout << text;
    }
    std::cout << "J " << round6(report.j_mean) << "  F " << round6(report.f_mean)
              << "  J&F " << round6(report.jf_mean) << "\n";
  } catch (const Error& e) {
    std::cerr << "eval error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace rvseg
