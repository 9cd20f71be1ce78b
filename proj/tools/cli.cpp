#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "glcmsample/curation.hpp"
#include "glcmsample/error.hpp"
#include "glcmsample/glcm.hpp"
#include "glcmsample/metrics.hpp"
#include "glcmsample/phantom.hpp"
#include "glcmsample/plot.hpp"
#include "glcmsample/sampler.hpp"
#include "glcmsample/serialize.hpp"
#include "glcmsample/volume_io.hpp"

namespace fs = std::filesystem;

namespace glcmsample::cli {

namespace {

struct CurateArgs {
  std::string volume;
  std::string masks;
  std::string id;
  double threshold = kDefaultLungThreshold;
  std::string preset;
  std::string out = "manifest.json";
};

struct GlcmArgs {
  int levels = 32;
  std::string offset = "1,0";
  bool symmetric = true;
  std::string range_mode = "global";
  unsigned threads = 1;
};

struct SampleArgs {
  int n = 16;
  std::string strategy = "glcm";
  int sg_window = 3;
  int sg_order = 2;
  std::uint64_t seed = 0;
  std::string quantile_mode = "midpoint";
  bool allow_duplicates = false;
};

struct ProfileArgs {
  std::string volume;
  std::string manifest;
  std::string id;
  std::optional<int> sg_window;
  int sg_order = 2;
  std::string out;
};

struct SampleCmdArgs {
  std::string profile;
  std::string volume_id;
  std::string out;
};

struct PlotArgs {
  std::string profile;
  std::string plan;
  std::string out;
};

struct PhantomArgs {
  std::string bands;
  int width = 64;
  int height = 64;
  int base = 1000;
  std::string id = "phantom";
  std::string out = "phantom.json";
};

struct ScoreArgs {
  std::string input;
};

struct PipelineArgs {
  std::string volume;
  std::string masks;
  std::string id;
  double threshold = kDefaultLungThreshold;
  std::string out_dir;
};

void add_glcm_flags(CLI::App* cmd, GlcmArgs& a) {
  cmd->add_option("--levels", a.levels, "Gray levels L");
  cmd->add_option("--offset", a.offset, "Pixel offset dx,dy");
  cmd->add_flag("--symmetric,!--no-symmetric", a.symmetric, "Symmetric co-occurrence (default on)");
  cmd->add_option("--range-mode", a.range_mode, "Quantization range: global|per_slice");
  cmd->add_option("--threads", a.threads, "Worker threads for per-slice work (0 = all cores)");
}

void add_sample_flags(CLI::App* cmd, SampleArgs& a) {
  cmd->add_option("--n", a.n, "Number of slices to select");
  cmd->add_option("--strategy", a.strategy, "glcm|center|uniform");
  cmd->add_option("--sg-window", a.sg_window, "Savitzky-Golay window (odd, >= 3)");
  cmd->add_option("--sg-order", a.sg_order, "Savitzky-Golay polynomial order");
  cmd->add_option("--seed", a.seed, "Seed for --quantile-mode seeded");
  cmd->add_option("--quantile-mode", a.quantile_mode, "midpoint|seeded");
  cmd->add_flag("--allow-duplicates", a.allow_duplicates, "Keep repeated inverse-CDF hits");
}

Offset parse_offset(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw Error("offset must be dx,dy");
  try {
    std::size_t u1 = 0, u2 = 0;
    const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    Offset o{std::stoi(a, &u1), std::stoi(b, &u2)};
    if (u1 != a.size() || u2 != b.size()) throw std::invalid_argument(text);
    return o;
  } catch (const std::exception&) {
    throw Error("offset must be dx,dy (got '" + text + "')");
  }
}

GlcmConfig to_config(const GlcmArgs& a) {
  GlcmConfig c;
  c.levels = a.levels;
  c.offset = parse_offset(a.offset);
  c.symmetric = a.symmetric;
  c.range_mode = parse_range_mode(a.range_mode);
  validate(c);
  return c;
}

SamplingConfig to_config(const SampleArgs& a) {
  if (a.n < 1) throw Error("n must be >= 1");
  SamplingConfig c;
  c.n_samples = a.n;
  c.strategy = parse_strategy(a.strategy);
  c.sg = {a.sg_window, a.sg_order};
  c.seed = a.seed;
  c.quantile_mode = parse_quantile_mode(a.quantile_mode);
  c.allow_duplicates = a.allow_duplicates;
  validate(c);
  return c;
}

std::string format_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", fraction * 100.0);
  return buf;
}

std::vector<Mask> load_masks(const fs::path& path, const Volume& volume) {
  const Volume mv = load_volume(path, "masks");
  std::vector<Mask> masks;
  for (const Slice& s : mv.slices()) masks.push_back(s.array() != 0);
  if (mv.n_slices() != volume.n_slices())
    throw Error("mask count mismatch: " + std::to_string(mv.n_slices()) + " masks for " +
                std::to_string(volume.n_slices()) + " slices");
  return masks;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-")
    out << text;
  else
    write_text_file(path, text);
}

void check_threshold(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error("threshold must be in [0,1]");
}

double resolve_threshold(double threshold, const std::string& preset) {
  if (preset.empty()) return threshold;
  for (double p : kThresholdPresets)
    if (format_percent(p) == preset) return p;
  throw Error("unknown preset '" + preset + "' (expected one of 0.5,1,2,3,4,5)");
}

CurationManifest run_curation(const Volume& volume, const std::string& masks, double threshold) {
  std::optional<std::vector<Mask>> m;
  if (!masks.empty()) m = load_masks(masks, volume);
  return curate_volume(volume, m, threshold);
}

std::string curate_summary(const CurationManifest& m) {
  return "kept " + std::to_string(m.kept_count()) + " of " + std::to_string(m.entries.size()) + " slices (threshold " +
         format_percent(m.threshold_fraction) + "%)\n";
}

ProfileTable smoothed_table(const EntropyProfile& profile, std::optional<SgConfig> sg) {
  ProfileTable t = to_table(profile);
  if (sg) t.smoothed = sg_smooth(profile.values, *sg);
  return t;
}

int cmd_curate(const CurateArgs& a, std::ostream& out) {
  check_threshold(a.threshold);
  const double threshold = resolve_threshold(a.threshold, a.preset);
  if (a.volume.empty()) throw Error("--volume is required");
  const Volume volume = load_volume(a.volume, a.id);
  const CurationManifest m = run_curation(volume, a.masks, threshold);
  write_text_file(a.out, to_json(m));
  out << curate_summary(m);
  return 0;
}

int cmd_profile(const ProfileArgs& p, const GlcmArgs& g, std::ostream& out) {
  const GlcmConfig config = to_config(g);
  std::optional<SgConfig> sg;
  if (p.sg_window) {
    sg = SgConfig{*p.sg_window, p.sg_order};
    validate(*sg);
  }
  const Volume volume = load_volume(p.volume, p.id);
  const CurationManifest manifest =
      p.manifest.empty() ? keep_all_manifest(volume) : manifest_from_json(read_text_file(p.manifest));
  const EntropyProfile profile = entropy_profile(volume, manifest, config, g.threads);
  emit(p.out, to_csv(smoothed_table(profile, sg)), out);
  return 0;
}

int cmd_sample(const SampleCmdArgs& a, const SampleArgs& s, std::ostream& out) {
  const SamplingConfig config = to_config(s);
  const ProfileTable table = profile_from_csv(read_text_file(a.profile));
  const std::string id = a.volume_id.empty() ? fs::path(a.profile).stem().string() : a.volume_id;
  emit(a.out, to_json(make_plan(to_profile(table, id), config)), out);
  return 0;
}

int cmd_plot(const PlotArgs& a, std::ostream& out) {
  const ProfileTable table = profile_from_csv(read_text_file(a.profile));
  std::optional<SamplingPlan> plan;
  if (!a.plan.empty()) plan = plan_from_json(read_text_file(a.plan));
  emit(a.out, render_profile_svg(table, plan), out);
  return 0;
}

int cmd_phantom(const PhantomArgs& a, std::ostream& out) {
  PhantomSpec spec;
  spec.width = a.width;
  spec.height = a.height;
  if (a.base < 0 || a.base > 65535) throw Error("base intensity must be in [0,65535]");
  spec.base_intensity = static_cast<std::uint16_t>(a.base);
  spec.bands = parse_bands(a.bands);
  const Volume v = generate_phantom(spec, a.id);
  write_raw_volume(v, a.out);
  out << "wrote " << v.n_slices() << " slices of " << v.width() << "x" << v.height() << " to " << a.out << "\n";
  return 0;
}

int cmd_score(const ScoreArgs& a, std::ostream& out) {
  std::istringstream in(read_text_file(a.input));
  std::vector<int> preds, labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    for (char& c : line)
      if (c == ',' || c == '\t' || c == ';' || c == '\r') c = ' ';
    std::istringstream row(line);
    std::string p, l, extra;
    if (!(row >> p) || p[0] == '#') continue;
    if (!(row >> l) || (row >> extra)) throw Error("score: line " + std::to_string(lineno) + ": expected 2 columns");
    auto as_binary = [&](const std::string& v) -> std::optional<int> {
      if (v == "0") return 0;
      if (v == "1") return 1;
      return std::nullopt;
    };
    const auto pv = as_binary(p), lv = as_binary(l);
    if (!pv || !lv) {
      if (preds.empty() && lineno == 1) continue;  // header
      throw Error("score: line " + std::to_string(lineno) + ": values must be 0 or 1");
    }
    preds.push_back(*pv);
    labels.push_back(*lv);
  }
  const ConfusionCounts c = confusion(preds, labels);
  const double f1 = macro_f1(c), sens = sensitivity(c), spec = specificity(c);
  char buf[160];
  std::snprintf(buf, sizeof buf, "macro_f1 %.2f\nsensitivity %.2f\nspecificity %.2f\n", 100.0 * f1, 100.0 * sens,
                100.0 * spec);
  out << buf;
  return 0;
}

int cmd_pipeline(const PipelineArgs& a, const GlcmArgs& g, const SampleArgs& s, std::ostream& out) {
  check_threshold(a.threshold);
  const GlcmConfig gconfig = to_config(g);
  const SamplingConfig sconfig = to_config(s);
  if (a.volume.empty()) throw Error("--volume is required");
  if (a.out_dir.empty()) throw Error("--out-dir is required");
  const Volume volume = load_volume(a.volume, a.id);
  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);

  const CurationManifest manifest = run_curation(volume, a.masks, a.threshold);
  write_text_file(dir / "manifest.json", to_json(manifest));
  out << curate_summary(manifest);

  const EntropyProfile profile = entropy_profile(volume, manifest, gconfig, g.threads);
  const ProfileTable table = smoothed_table(profile, SgConfig{s.sg_window, s.sg_order});
  write_text_file(dir / "profile.csv", to_csv(table));

  const SamplingPlan plan = make_plan(profile, sconfig);
  write_text_file(dir / "plan.json", to_json(plan));
  write_text_file(dir / "plot.svg", render_profile_svg(table, plan));

  out << "selected";
  for (int i : plan.selected) out << ' ' << i;
  out << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Slice curation and GLCM-entropy adaptive slice sampling for volumetric scans", "glcmsample"};
  app.require_subcommand(1);

  CurateArgs curate;
  ProfileArgs profile;
  SampleCmdArgs sample;
  PlotArgs plot;
  PhantomArgs phantom;
  ScoreArgs score;
  PipelineArgs pipeline;
  GlcmArgs glcm_flags;
  SampleArgs sample_flags;

  auto* c = app.add_subcommand("curate", "Keep slices whose lung fraction meets a threshold");
  c->add_option("--volume", curate.volume, "Raw volume header or image-stack directory");
  c->add_option("--masks", curate.masks, "Lung masks (image stack or raw volume, nonzero = lung)");
  c->add_option("--id", curate.id, "Volume id override");
  c->add_option("--threshold", curate.threshold, "Minimum lung fraction in [0,1]");
  c->add_option("--preset", curate.preset, "Threshold preset in percent: 0.5|1|2|3|4|5");
  c->add_option("--out", curate.out, "Manifest output path");

  auto* p = app.add_subcommand("profile", "Per-slice GLCM entropy profile as CSV");
  p->add_option("--volume", profile.volume, "Raw volume header or image-stack directory")->required();
  p->add_option("--manifest", profile.manifest, "Curation manifest (default: keep every slice)");
  p->add_option("--id", profile.id, "Volume id override");
  p->add_option("--sg-window", profile.sg_window, "Also emit a Savitzky-Golay smoothed column");
  p->add_option("--sg-order", profile.sg_order, "Savitzky-Golay polynomial order");
  p->add_option("--out", profile.out, "CSV output path (default: standard output)");
  add_glcm_flags(p, glcm_flags);

  auto* s = app.add_subcommand("sample", "Build a sampling plan from a profile CSV");
  s->add_option("--profile", sample.profile, "Profile CSV")->required();
  s->add_option("--volume-id", sample.volume_id, "Volume id recorded in the plan");
  s->add_option("--out", sample.out, "Plan output path (default: standard output)");
  add_sample_flags(s, sample_flags);

  auto* pl = app.add_subcommand("plot", "Render a profile (and plan) as SVG");
  pl->add_option("--profile", plot.profile, "Profile CSV")->required();
  pl->add_option("--plan", plot.plan, "Sampling plan");
  pl->add_option("--out", plot.out, "SVG output path (default: standard output)");

  auto* ph = app.add_subcommand("phantom", "Write a synthetic banded volume in raw format");
  ph->add_option("--bands", phantom.bands,
                 "Comma-separated bands: N:constant | N:checker[:period[:contrast]] | N:noise[:seed[:amplitude]]")
      ->required();
  ph->add_option("--width", phantom.width, "Slice width");
  ph->add_option("--height", phantom.height, "Slice height");
  ph->add_option("--base", phantom.base, "Base intensity");
  ph->add_option("--id", phantom.id, "Volume id");
  ph->add_option("--out", phantom.out, "Header output path");

  auto* sc = app.add_subcommand("score", "Macro F1, sensitivity and specificity in percent");
  sc->add_option("--input", score.input, "Two-column prediction,label file")->required();

  auto* pipe = app.add_subcommand("pipeline", "curate -> profile -> sample -> plot");
  pipe->add_option("--volume", pipeline.volume, "Raw volume header or image-stack directory");
  pipe->add_option("--masks", pipeline.masks, "Lung masks");
  pipe->add_option("--id", pipeline.id, "Volume id override");
  pipe->add_option("--threshold", pipeline.threshold, "Minimum lung fraction in [0,1]");
  pipe->add_option("--out-dir", pipeline.out_dir, "Output directory");
  add_glcm_flags(pipe, glcm_flags);
  add_sample_flags(pipe, sample_flags);

  std::vector<std::string> argv(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*c) return cmd_curate(curate, out);
    if (*p) return cmd_profile(profile, glcm_flags, out);
    if (*s) return cmd_sample(sample, sample_flags, out);
    if (*pl) return cmd_plot(plot, out);
    if (*ph) return cmd_phantom(phantom, out);
    if (*sc) return cmd_score(score, out);
    if (*pipe) return cmd_pipeline(pipeline, glcm_flags, sample_flags, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace glcmsample::cli
