#include "berrylab/runner.hpp"

#include <filesystem>
#include <sstream>

#include "json.hpp"

#include "berrylab/io.hpp"

namespace berrylab {

using nlohmann::json;

int exit_status_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config: return exit_status::kConfig;
    case ErrorKind::Domain:
    case ErrorKind::Precondition: return exit_status::kPrecondition;
    case ErrorKind::Numerical: return exit_status::kNumerical;
    case ErrorKind::Io: return exit_status::kIo;
  }
  return exit_status::kNumerical;
}

namespace {

json number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

json to_json(const MeanEstimate& e) {
  return {{"mean", number(e.mean)}, {"std_error", number(e.std_error)}, {"radius", number(e.radius)},
          {"count", e.count}};
}

json to_json(const std::vector<MeanEstimate>& es) {
  json a = json::array();
  for (const auto& e : es) a.push_back(to_json(e));
  return a;
}

json to_json(const KsResult& k) {
  return {{"statistic", number(k.statistic)}, {"p_value", number(k.p_value)}, {"n", k.n}};
}

json point_json(const Point& p, int d) {
  json a = json::array();
  for (int i = 0; i < d; ++i) a.push_back(p[static_cast<std::size_t>(i)]);
  return a;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

struct Collector {
  std::string hash;
  std::vector<OutputFile> files;

  void add(const std::string& name, const CsvTable& t) { files.push_back({name, t.render(hash)}); }
  void plot(const std::string& name, const CsvTable& t) { add("plot_" + name + ".csv", t); }
};

RunOptions options_of(const ExperimentConfig& c, int threads) { return RunOptions{c.confidence, threads}; }

FunctionalSpec functional_of(const ExperimentConfig& c) {
  FunctionalSpec F = c.functional;
  if (F.kind == FunctionalKind::ChiNorm) F.target = build_target(c);
  validate_functional(F);
  return F;
}

json run_berry_expectation(const ExperimentConfig& c, int threads, Collector& out, std::string& headline) {
  const BerryExpectationResult r =
      c.berry_source ? berry_self_consistency(functional_of(c), c.sampler, c.berry_samples, c.grid, c.seed,
                                              options_of(c, threads))
                     : berry_expectation_test(c.sequence, functional_of(c), c.sampling, c.sampler, c.berry_samples,
                                              c.grid, c.seed, options_of(c, threads));
  json rows = json::array();
  CsvTable summary;
  summary.header = {"lambda", "multiplicity", "output", "mean", "radius", "berry_mean", "berry_radius", "gap",
                    "gap_radius"};
  double worst = 0.0;
  for (const auto& l : r.lambdas) {
    json charts = json::array();
    for (const auto& ch : l.charts) charts.push_back({{"chart", ch.chart}, {"outputs", to_json(ch.outputs)}});
    rows.push_back({{"lambda", l.lambda}, {"multiplicity", l.multiplicity}, {"pooled", to_json(l.pooled)},
                    {"gap", to_json(l.gap)}, {"charts", charts}});
    for (std::size_t k = 0; k < r.outputs.size(); ++k) {
      summary.add({format_number(l.lambda), std::to_string(l.multiplicity), r.outputs[k], format_number(l.pooled[k].mean),
                   format_number(l.pooled[k].radius), format_number(r.berry[k].mean), format_number(r.berry[k].radius),
                   format_number(l.gap[k].mean), format_number(l.gap[k].radius)});
      worst = std::max(worst, std::fabs(l.gap[k].mean));
    }
  }
  out.add(kSummaryFile, summary);
  for (std::size_t k = 0; k < r.outputs.size(); ++k) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& l : r.lambdas) {
      xs.push_back(l.lambda);
      ys.push_back(l.gap[k].mean);
    }
    out.plot("gap_" + sanitize(r.outputs[k]), series("lambda", "gap", xs, ys));
  }
  headline = "max |gap| = " + format_number(worst) + " over " + std::to_string(r.lambdas.size()) + " eigenvalue(s)";
  return {{"functional", r.functional}, {"outputs", r.outputs}, {"berry", to_json(r.berry)}, {"lambdas", rows}};
}

json marginal_row(const MarginalRow& m) {
  return {{"label", m.label}, {"lambda", m.lambda}, {"multiplicity", m.multiplicity}, {"ks", to_json(m.ks)},
          {"mean", number(m.mean)}, {"variance", number(m.variance)}};
}

json run_marginal(const ExperimentConfig& c, int threads, Collector& out, std::string& headline) {
  std::optional<SamplerSpec> control;
  if (c.control) control = c.sampler;
  MarginalResult r;
  if (c.berry_source) {
    r.point = c.point;
    r.rows.push_back(berry_marginal(c.sampler, c.sampling.base_points, c.point, c.seed, options_of(c, threads)));
  } else {
    r = marginal_distribution_test(c.sequence, c.point, c.sampling, c.seed, control, options_of(c, threads));
  }
  CsvTable summary;
  summary.header = {"label", "lambda", "multiplicity", "ks_statistic", "p_value", "mean", "variance"};
  json rows = json::array();
  std::vector<const MarginalRow*> all;
  for (const auto& m : r.rows) all.push_back(&m);
  if (r.control) all.push_back(&*r.control);
  double min_p = 1.0;
  for (const MarginalRow* m : all) {
    summary.add({m->label, format_number(m->lambda), std::to_string(m->multiplicity), format_number(m->ks.statistic),
                 format_number(m->ks.p_value), format_number(m->mean), format_number(m->variance)});
  }
  std::vector<double> xs;
  std::vector<double> ps;
  for (const auto& m : r.rows) {
    rows.push_back(marginal_row(m));
    xs.push_back(m.lambda);
    ps.push_back(m.ks.p_value);
    min_p = std::min(min_p, m.ks.p_value);
  }
  out.add(kSummaryFile, summary);
  out.plot("ks_p_value", series("lambda", "p_value", xs, ps));
  headline = "min KS p-value = " + format_number(min_p);
  json result = {{"point", point_json(r.point, c.sequence.manifold.dimension())}, {"rows", rows}};
  result["control"] = r.control ? marginal_row(*r.control) : json(nullptr);
  return result;
}

json run_covariance(const ExperimentConfig& c, int threads, Collector& out, std::string& headline) {
  CovarianceResult r;
  if (c.berry_source) {
    CovarianceOptions opts;
    opts.confidence = c.confidence;
    opts.threads = threads;
    CovarianceRow row;
    row.label = std::string("berry:") + sampler_name(c.sampler.kind);
    row.profile = empirical_covariance(c.sampler, c.sampling.base_points, c.separations, c.seed, opts);
    r.rows.push_back(std::move(row));
  } else {
    r = covariance_profile_test(c.sequence, c.separations, c.direction, c.sampling, c.seed, options_of(c, threads));
  }
  CsvTable summary;
  summary.header = {"lambda", "r", "C_hat", "ci", "kernel"};
  json rows = json::array();
  double worst = 0.0;
  for (std::size_t li = 0; li < r.rows.size(); ++li) {
    const CovarianceProfile& p = r.rows[li].profile;
    for (std::size_t k = 0; k < p.separations.size(); ++k) {
      summary.add({format_number(r.rows[li].lambda), format_number(p.separations[k]), format_number(p.estimate[k]),
                   format_number(p.radius[k]), format_number(p.kernel[k])});
    }
    worst = std::max(worst, p.sup_deviation());
    rows.push_back({{"label", r.rows[li].label}, {"lambda", r.rows[li].lambda},
                    {"multiplicity", r.rows[li].multiplicity}, {"separations", p.separations},
                    {"estimate", p.estimate}, {"radius", p.radius}, {"kernel", p.kernel},
                    {"samples", p.samples}, {"sup_deviation", p.sup_deviation()}});
    out.plot("covariance_" + std::to_string(li), series("r", "C_hat", p.separations, p.estimate));
  }
  if (!r.rows.empty()) {
    const CovarianceProfile& p = r.rows.front().profile;
    out.plot("kernel", series("r", "kernel", p.separations, p.kernel));
  }
  out.add(kSummaryFile, summary);
  headline = "sup |C_hat - kernel| = " + format_number(worst);
  json result = {{"rows", rows}};
  result["direction"] = c.berry_source ? json("isotropic") : point_json(r.direction, c.sequence.manifold.dimension());
  return result;
}

json run_translation(const ExperimentConfig& c, int threads, Collector& out, std::string& headline) {
  const TranslationResult r = translation_invariance_test(c.sequence, functional_of(c), c.shift, c.sampling, c.grid,
                                                          c.seed, options_of(c, threads));
  CsvTable summary;
  summary.header = {"lambda", "multiplicity", "output", "base", "shifted", "gap", "gap_radius"};
  json rows = json::array();
  std::vector<double> xs;
  std::vector<double> gaps;
  for (const auto& row : r.rows) {
    for (std::size_t k = 0; k < r.outputs.size(); ++k) {
      summary.add({format_number(row.lambda), std::to_string(row.multiplicity), r.outputs[k],
                   format_number(row.base[k].mean), format_number(row.shifted[k].mean), format_number(row.gap[k].mean),
                   format_number(row.gap[k].radius)});
    }
    rows.push_back({{"lambda", row.lambda}, {"multiplicity", row.multiplicity}, {"base", to_json(row.base)},
                    {"shifted", to_json(row.shifted)}, {"gap", to_json(row.gap)}});
    xs.push_back(row.lambda);
    gaps.push_back(std::fabs(row.gap[0].mean));
  }
  out.add(kSummaryFile, summary);
  out.plot("abs_gap", series("lambda", "abs_gap", xs, gaps));
  json result = {{"outputs", r.outputs}, {"shift", point_json(r.shift, c.sequence.manifold.dimension())},
                 {"rows", rows}};
  if (r.rate) {
    result["rate"] = {{"exponent", number(r.rate->exponent)}, {"decreasing", r.rate->decreasing},
                      {"constant_ratio", number(r.rate->constant_ratio)}, {"consistent", r.rate->consistent}};
    headline = "gap rate exponent " + format_number(r.rate->exponent) +
               (r.rate->consistent ? ", consistent with C/sqrt(lambda)" : ", not consistent with C/sqrt(lambda)");
  } else {
    result["rate"] = nullptr;
    headline = "|gap| = " + (gaps.empty() ? std::string("n/a") : format_number(gaps.front()));
  }
  return result;
}

GridSpec il_grid(const ExperimentConfig& c) {
  GridSpec g = c.grid;
  g.order = c.order;
  g.layout = GridLayout::Ball;
  return g;
}

json run_inverse_localize(const ExperimentConfig& c, Collector& out, std::string& headline) {
  const std::vector<EigenvalueEntry> entries = resolve_eigenvalues(c.sequence);
  const BasePoint p = make_base_point(c.sequence.manifold, c.base_point);
  const SourcePtr target = build_target(c);
  const GridSpec g = il_grid(c);
  const InverseLocalizeResult r = inverse_localize(c.sequence.manifold, entries.front(), p, *target, c.order, g);
  const auto psi = std::make_shared<const Eigenfunction>(r.eigenfunction);
  const LocalizedEigenfunction fit(psi, p);

  CsvTable summary;
  summary.header = {"lambda", "multiplicity", "error", "rms_misfit", "rank"};
  summary.add({format_number(r.eigenfunction.lambda()), std::to_string(r.multiplicity), format_number(r.error),
               format_number(r.rms_misfit), std::to_string(r.rank)});
  out.add(kSummaryFile, summary);

  std::vector<double> ys;
  std::vector<double> hv;
  std::vector<double> fv;
  const int d = c.sequence.manifold.dimension();
  for (int i = 0; i <= 100; ++i) {
    Point y{};
    y[0] = -g.radius + 2.0 * g.radius * i / 100.0;
    const std::span<const double> s(y.data(), static_cast<std::size_t>(d));
    ys.push_back(y[0]);
    hv.push_back(target->value(s));
    fv.push_back(fit.value(s));
  }
  out.plot("profile_target", series("y1", "h", ys, hv));
  out.plot("profile_fit", series("y1", "phi", ys, fv));

  json result = {{"lambda", r.eigenfunction.lambda()},
                 {"multiplicity", r.multiplicity},
                 {"error", number(r.error)},
                 {"rms_misfit", number(r.rms_misfit)},
                 {"rank", r.rank},
                 {"target", target->provenance()},
                 {"coefficients", std::vector<double>(r.eigenfunction.coefficients().begin(),
                                                      r.eigenfunction.coefficients().end())}};
  if (c.frechet) {
    const FrechetResult f = frechet_distance(fit, *target, c.frechet_params);
    result["frechet"] = {{"distance", number(f.distance)}, {"tail_bound", number(f.tail_bound)}};
  } else {
    result["frechet"] = nullptr;
  }
  headline = "C^" + std::to_string(c.order) + " error = " + format_number(r.error);
  return result;
}

json run_il_scan(const ExperimentConfig& c, int threads, Collector& out, std::string& headline) {
  const std::vector<EigenvalueEntry> entries = resolve_eigenvalues(c.sequence);
  const BasePoint p = make_base_point(c.sequence.manifold, c.base_point);
  const SourcePtr target = build_target(c);
  const IlScanResult r = il_scan(c.sequence.manifold, entries, *target, c.order, p, il_grid(c), threads);
  CsvTable summary;
  summary.header = {"lambda", "multiplicity", "error", "rms_misfit", "rank"};
  json rows = json::array();
  std::vector<double> xs;
  std::vector<double> es;
  for (const auto& row : r.rows) {
    summary.add({format_number(row.lambda), std::to_string(row.multiplicity), format_number(row.error),
                 format_number(row.rms_misfit), std::to_string(row.rank)});
    rows.push_back({{"lambda", row.lambda}, {"multiplicity", row.multiplicity}, {"error", number(row.error)},
                    {"rms_misfit", number(row.rms_misfit)}, {"rank", row.rank}});
    xs.push_back(row.lambda);
    es.push_back(row.error);
  }
  out.add(kSummaryFile, summary);
  out.plot("error", series("lambda", "error", xs, es));
  headline = "min error " + format_number(r.min_error) + ", final " + format_number(r.final_error) + ", " +
             std::to_string(r.increases) + " increase(s)";
  return {{"rows", rows}, {"increases", r.increases}, {"non_increasing", r.non_increasing},
          {"min_error", number(r.min_error)}, {"final_error", number(r.final_error)},
          {"target", target->provenance()}};
}

json strong_row(const StrongIlRow& s) {
  return {{"label", s.label}, {"lambda", s.lambda}, {"multiplicity", s.multiplicity},
          {"successes", s.successes}, {"trials", s.trials}, {"fraction", s.fraction},
          {"radius", s.radius}, {"wilson", {s.wilson.lower, s.wilson.upper}}, {"positive", s.positive}};
}

json run_strong_il(const ExperimentConfig& c, int threads, Collector& out, std::string& headline) {
  const SourcePtr target = build_target(c);
  std::optional<SamplerSpec> control;
  if (c.control) control = c.sampler;
  const StrongIlResult r = strong_il_measure_estimate(c.sequence, *target, c.epsilon, c.order, c.sampling,
                                                      il_grid(c), c.seed, control, c.control_samples,
                                                      options_of(c, threads));
  CsvTable summary;
  summary.header = {"label", "lambda", "multiplicity", "successes", "trials", "fraction", "radius",
                    "wilson_lower", "wilson_upper", "positive"};
  std::vector<const StrongIlRow*> all;
  for (const auto& s : r.rows) all.push_back(&s);
  if (r.control) all.push_back(&*r.control);
  for (const StrongIlRow* s : all) {
    summary.add({s->label, format_number(s->lambda), std::to_string(s->multiplicity), std::to_string(s->successes),
                 std::to_string(s->trials), format_number(s->fraction), format_number(s->radius),
                 format_number(s->wilson.lower), format_number(s->wilson.upper), s->positive ? "true" : "false"});
  }
  json rows = json::array();
  std::vector<double> xs;
  std::vector<double> fs;
  int positive = 0;
  for (const auto& s : r.rows) {
    rows.push_back(strong_row(s));
    xs.push_back(s.lambda);
    fs.push_back(s.fraction);
    positive += s.positive ? 1 : 0;
  }
  out.add(kSummaryFile, summary);
  out.plot("fraction", series("lambda", "fraction", xs, fs));
  headline = std::to_string(positive) + "/" + std::to_string(r.rows.size()) + " eigenvalue(s) with positive fraction";
  if (r.control) headline += "; control fraction " + format_number(r.control->fraction);
  json result = {{"rows", rows}, {"epsilon", c.epsilon}, {"order", c.order}, {"target", target->provenance()}};
  result["control"] = r.control ? strong_row(*r.control) : json(nullptr);
  return result;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, int threads) {
  if (threads < 1) throw PreconditionError("threads must be at least 1");
  Collector out{config.hash, {}};
  std::string headline;
  json result;
  switch (config.kind) {
    case ExperimentKind::BerryExpectation: result = run_berry_expectation(config, threads, out, headline); break;
    case ExperimentKind::Marginal: result = run_marginal(config, threads, out, headline); break;
    case ExperimentKind::Covariance: result = run_covariance(config, threads, out, headline); break;
    case ExperimentKind::Translation: result = run_translation(config, threads, out, headline); break;
    case ExperimentKind::InverseLocalize: result = run_inverse_localize(config, out, headline); break;
    case ExperimentKind::IlScan: result = run_il_scan(config, threads, out, headline); break;
    case ExperimentKind::StrongIl: result = run_strong_il(config, threads, out, headline); break;
  }
  json files = json::array();
  for (const auto& f : out.files) files.push_back(f.name);
  const json record = {{"schema_version", kRecordSchemaVersion},
                       {"experiment", experiment_name(config.kind)},
                       {"config_hash", config.hash},
                       {"seed", config.seed},
                       {"config", config.canonical},
                       {"manifold", config.sequence.manifold.describe()},
                       {"files", files},
                       {"result", result}};
  RunResult run;
  run.hash = config.hash;
  run.record = record.dump(2) + "\n";
  run.files = std::move(out.files);
  run.headline = std::string(experiment_name(config.kind)) + ": " + headline;
  return run;
}

void write_outputs(const RunResult& result, const std::string& dir) {
  ensure_directory(dir);
  const std::filesystem::path base(dir);
  for (const auto& f : result.files) write_text_file((base / f.name).string(), f.content);
  write_text_file((base / kRecordFile).string(), result.record);
}

CheckReport check_outputs(const std::string& dir, const std::optional<std::string>& config_path) {
  CheckReport report;
  const std::filesystem::path base(dir);
  json record;
  try {
    record = json::parse(read_text_file((base / kRecordFile).string()));
  } catch (const json::exception& e) {
    throw IoError(std::string("record.json is not valid JSON: ") + e.what());
  }
  if (!record.contains("config") || !record.contains("config_hash") || !record.contains("files")) {
    report.problems.push_back("record.json lacks config, config_hash or files");
    return report;
  }
  const std::string canonical = record["config"].get<std::string>();
  report.hash = record["config_hash"].get<std::string>();
  if (sha256_hex(canonical) != report.hash) report.problems.push_back("config_hash does not match the embedded config");
  const ValidationReport v = validate_config_text(canonical);
  if (!v.ok) {
    report.problems.push_back("embedded config does not validate");
  } else if (v.config->hash != report.hash) {
    report.problems.push_back("embedded config is not in canonical form");
  }
  const std::string stamp = "# config_hash=" + report.hash + "\n";
  for (const auto& name : record["files"]) {
    const std::string n = name.get<std::string>();
    std::string content;
    try {
      content = read_text_file((base / n).string());
    } catch (const IoError&) {
      report.problems.push_back(n + ": missing");
      continue;
    }
    if (content.rfind(stamp, 0) != 0) report.problems.push_back(n + ": config hash missing or different");
  }
  if (config_path) {
    const ValidationReport c = validate_config_file(*config_path);
    if (!c.ok) {
      report.problems.push_back(*config_path + ": does not validate");
    } else if (c.config->hash != report.hash) {
      ExperimentConfig cfg = *c.config;
      const std::uint64_t seed = record.value("seed", std::uint64_t{0});
      const ExperimentConfig overridden = parse_config(cfg.canonical, seed);
      if (overridden.hash != report.hash) report.problems.push_back(*config_path + ": hash differs from the record");
    }
  }
  report.ok = report.problems.empty();
  return report;
}

}  // namespace berrylab
