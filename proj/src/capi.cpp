#include "berrylab/berrylab.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "berrylab/berry_field.hpp"
#include "berrylab/config.hpp"
#include "berrylab/errors.hpp"
#include "berrylab/localization.hpp"
#include "berrylab/manifolds.hpp"
#include "berrylab/runner.hpp"
#include "berrylab/special_functions.hpp"

using namespace berrylab;

struct blab_manifold {
  ManifoldSpec spec;
};

struct blab_eigenfunction {
  std::shared_ptr<const Eigenfunction> psi;
};

struct blab_field {
  SourcePtr source;
};

struct blab_sampled {
  std::shared_ptr<const LocalizedField> field;
};

namespace {

thread_local std::string last_error;

blab_status fail(blab_status s, const std::string& message) {
  last_error = message;
  return s;
}

blab_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return BLAB_ERR_CONFIG;
    case ErrorKind::Domain:
    case ErrorKind::Precondition: return BLAB_ERR_PRECONDITION;
    case ErrorKind::Numerical: return BLAB_ERR_NUMERICAL;
    case ErrorKind::Io: return BLAB_ERR_IO;
  }
  return BLAB_ERR_INTERNAL;
}

template <class F>
blab_status guard(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(BLAB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BLAB_ERR_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define BLAB_REQUIRE(cond, what) \
  if (!(cond)) return fail(BLAB_ERR_ARGUMENT, what)

blab_status copy_out(const std::vector<double>& v, double* out, size_t cap, size_t* count) {
  if (count) *count = v.size();
  if (cap < v.size()) return fail(BLAB_ERR_BUFFER, "buffer holds " + std::to_string(cap) + ", need " + std::to_string(v.size()));
  if (!v.empty()) {
    if (out == nullptr) return fail(BLAB_ERR_ARGUMENT, "output buffer is null");
    std::memcpy(out, v.data(), v.size() * sizeof(double));
  }
  return BLAB_OK;
}

std::string report_text(const ValidationReport& r) {
  std::ostringstream os;
  if (r.ok) {
    os << "ok " << r.config->hash << "\n";
  } else {
    os << "invalid\n";
  }
  for (const auto& n : r.notices) os << "notice: " << n << "\n";
  for (const auto& e : r.errors) os << "error: " << e << "\n";
  return os.str();
}

blab_status run_config(const ExperimentConfig& config, const char* out_dir, int threads, char** headline,
                       char** record) {
  const RunResult result = run_experiment(config, threads < 1 ? 1 : threads);
  write_outputs(result, out_dir ? std::string(out_dir) : config.output_directory);
  if (headline) *headline = copy_string(result.headline);
  if (record) *record = copy_string(result.record);
  return BLAB_OK;
}

}  // namespace

extern "C" {

const char* blab_last_error(void) { return last_error.c_str(); }

const char* blab_status_name(blab_status status) {
  switch (status) {
    case BLAB_OK: return "ok";
    case BLAB_ERR_ARGUMENT: return "argument";
    case BLAB_ERR_CONFIG: return "config";
    case BLAB_ERR_PRECONDITION: return "precondition";
    case BLAB_ERR_NUMERICAL: return "numerical";
    case BLAB_ERR_IO: return "io";
    case BLAB_ERR_BUFFER: return "buffer";
    case BLAB_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* blab_version(void) { return "1.0.0"; }

int blab_exit_code(blab_status status) {
  switch (status) {
    case BLAB_OK: return exit_status::kOk;
    case BLAB_ERR_ARGUMENT:
    case BLAB_ERR_BUFFER: return exit_status::kUsage;
    case BLAB_ERR_CONFIG: return exit_status::kConfig;
    case BLAB_ERR_PRECONDITION: return exit_status::kPrecondition;
    case BLAB_ERR_IO: return exit_status::kIo;
    case BLAB_ERR_NUMERICAL:
    case BLAB_ERR_INTERNAL: return exit_status::kNumerical;
  }
  return exit_status::kNumerical;
}

void blab_string_free(char* s) { std::free(s); }

blab_status blab_bessel_j(double nu, double x, double* out) {
  BLAB_REQUIRE(out, "out is null");
  return guard([&] {
    *out = bessel_j(nu, x);
    return BLAB_OK;
  });
}

blab_status blab_bessel_j_zero(double nu, int k, double* out) {
  BLAB_REQUIRE(out, "out is null");
  return guard([&] {
    *out = bessel_j_zero(nu, k);
    return BLAB_OK;
  });
}

blab_status blab_legendre_p(int l, double x, double* out) {
  BLAB_REQUIRE(out, "out is null");
  return guard([&] {
    *out = legendre_p(l, x);
    return BLAB_OK;
  });
}

blab_status blab_spherical_harmonic(int l, int m, const double omega[3], double* out) {
  BLAB_REQUIRE(out && omega, "null pointer");
  return guard([&] {
    *out = spherical_harmonic(HarmonicIndex{3, l, m}, std::span<const double>(omega, 3));
    return BLAB_OK;
  });
}

blab_status blab_berry_kernel(int dimension, double r, double* out) {
  BLAB_REQUIRE(out, "out is null");
  return guard([&] {
    *out = berry_kernel(dimension, r);
    return BLAB_OK;
  });
}

blab_status blab_manifold_torus(const double* sides, size_t n, int irrational, blab_manifold** out) {
  BLAB_REQUIRE(sides && out, "null pointer");
  return guard([&] {
    *out = new blab_manifold{ManifoldSpec::torus(std::vector<double>(sides, sides + n), irrational != 0)};
    return BLAB_OK;
  });
}

blab_status blab_manifold_sphere(blab_manifold** out) {
  BLAB_REQUIRE(out, "out is null");
  return guard([&] {
    *out = new blab_manifold{ManifoldSpec::sphere()};
    return BLAB_OK;
  });
}

void blab_manifold_free(blab_manifold* m) { delete m; }

int blab_manifold_dimension(const blab_manifold* m) { return m ? m->spec.dimension() : 0; }

blab_status blab_manifold_eigenvalues(const blab_manifold* m, double max_lambda, double* lambdas,
                                      int* multiplicities, size_t cap, size_t* count) {
  BLAB_REQUIRE(m && count, "null pointer");
  return guard([&] {
    const std::vector<EigenvalueEntry> entries = eigenvalues_up_to(m->spec, max_lambda);
    *count = entries.size();
    if (cap < entries.size()) {
      return fail(BLAB_ERR_BUFFER, "need room for " + std::to_string(entries.size()) + " eigenvalues");
    }
    if (!entries.empty() && (lambdas == nullptr || multiplicities == nullptr)) {
      return fail(BLAB_ERR_ARGUMENT, "output buffers are null");
    }
    for (size_t i = 0; i < entries.size(); ++i) {
      lambdas[i] = entries[i].lambda;
      multiplicities[i] = entries[i].multiplicity;
    }
    return BLAB_OK;
  });
}

blab_status blab_eigenfunction_create(const blab_manifold* m, double lambda, const double* coefficients, size_t n,
                                      int normalize, blab_eigenfunction** out) {
  BLAB_REQUIRE(m && coefficients && out, "null pointer");
  return guard([&] {
    const EigenvalueEntry entry = eigenspace(m->spec, lambda);
    if (n != static_cast<size_t>(entry.multiplicity)) {
      return fail(BLAB_ERR_ARGUMENT, "eigenspace has dimension " + std::to_string(entry.multiplicity) + ", got " +
                                         std::to_string(n) + " coefficients");
    }
    std::vector<double> c(coefficients, coefficients + n);
    auto psi = normalize ? Eigenfunction::make(m->spec, entry, std::move(c)) : Eigenfunction::raw(m->spec, entry, std::move(c));
    *out = new blab_eigenfunction{std::make_shared<const Eigenfunction>(std::move(psi))};
    return BLAB_OK;
  });
}

blab_status blab_eigenfunction_random(const blab_manifold* m, double lambda, uint64_t seed, blab_eigenfunction** out) {
  BLAB_REQUIRE(m && out, "null pointer");
  return guard([&] {
    EigenfunctionSequenceSpec seq;
    seq.manifold = m->spec;
    seq.coefficient_seed = seed;
    const EigenvalueEntry entry = eigenspace(m->spec, lambda);
    *out = new blab_eigenfunction{std::make_shared<const Eigenfunction>(sequence_member(seq, entry, 0))};
    return BLAB_OK;
  });
}

void blab_eigenfunction_free(blab_eigenfunction* e) { delete e; }

int blab_eigenfunction_multiplicity(const blab_eigenfunction* e) { return e ? e->psi->entry().multiplicity : 0; }

blab_status blab_eigenfunction_value(const blab_eigenfunction* e, const double* point, size_t n, double* out) {
  BLAB_REQUIRE(e && point && out, "null pointer");
  return guard([&] {
    *out = e->psi->value(std::span<const double>(point, n));
    return BLAB_OK;
  });
}

blab_status blab_field_berry(blab_sampler kind, int dimension, int directions, int degree_cap, uint64_t seed,
                             uint64_t index, blab_field** out) {
  BLAB_REQUIRE(out, "out is null");
  BLAB_REQUIRE(kind == BLAB_SAMPLER_PLANE_WAVE || kind == BLAB_SAMPLER_BESSEL_FOURIER, "unknown sampler");
  return guard([&] {
    SamplerSpec spec;
    spec.kind = kind == BLAB_SAMPLER_PLANE_WAVE ? SamplerKind::PlaneWave : SamplerKind::BesselFourier;
    spec.dimension = dimension;
    spec.directions = directions;
    spec.degree_cap = degree_cap;
    *out = new blab_field{draw_berry(spec, seed, index)};
    return BLAB_OK;
  });
}

blab_status blab_field_radial_wave(int dimension, double scale, blab_field** out) {
  BLAB_REQUIRE(out, "out is null");
  return guard([&] {
    *out = new blab_field{std::make_shared<BesselFourierFunction>(radial_wave(dimension, scale))};
    return BLAB_OK;
  });
}

blab_status blab_field_localize(const blab_eigenfunction* e, const double* base_point, size_t n, blab_field** out) {
  BLAB_REQUIRE(e && base_point && out, "null pointer");
  return guard([&] {
    const BasePoint p = make_base_point(e->psi->manifold(), std::span<const double>(base_point, n));
    *out = new blab_field{std::make_shared<LocalizedEigenfunction>(e->psi, p)};
    return BLAB_OK;
  });
}

void blab_field_free(blab_field* f) { delete f; }

int blab_field_dimension(const blab_field* f) { return f ? f->source->dimension() : 0; }

blab_status blab_field_value(const blab_field* f, const double* y, size_t n, double* out) {
  BLAB_REQUIRE(f && y && out, "null pointer");
  BLAB_REQUIRE(n == static_cast<size_t>(f->source->dimension()), "point has the wrong dimension");
  return guard([&] {
    check_in_domain(*f->source, std::span<const double>(y, n));
    *out = f->source->value(std::span<const double>(y, n));
    return BLAB_OK;
  });
}

blab_status blab_field_derivatives(const blab_field* f, const double* y, size_t n, int order, double* out, size_t cap,
                                   size_t* count) {
  BLAB_REQUIRE(f && y, "null pointer");
  BLAB_REQUIRE(n == static_cast<size_t>(f->source->dimension()), "point has the wrong dimension");
  return guard([&] {
    Point p{};
    std::copy(y, y + n, p.begin());
    const DerivativeTable t = evaluate_points(*f->source, std::span<const Point>(&p, 1), order);
    return copy_out(t.data, out, cap, count);
  });
}

blab_status blab_frechet_distance(const blab_field* f, const blab_field* g, int kmax, int nmax, double spacing,
                                  double* distance, double* tail_bound) {
  BLAB_REQUIRE(f && g && distance, "null pointer");
  return guard([&] {
    const FrechetResult r = frechet_distance(*f->source, *g->source, FrechetParams{kmax, nmax, spacing});
    *distance = r.distance;
    if (tail_bound) *tail_bound = r.tail_bound;
    return BLAB_OK;
  });
}

blab_status blab_sample(const blab_field* f, double radius, int resolution, int order, blab_sampled** out) {
  BLAB_REQUIRE(f && out, "null pointer");
  return guard([&] {
    GridSpec g;
    g.dimension = f->source->dimension();
    g.radius = radius;
    g.resolution = resolution;
    g.order = order;
    *out = new blab_sampled{std::make_shared<const LocalizedField>(sample(*f->source, g))};
    return BLAB_OK;
  });
}

void blab_sampled_free(blab_sampled* s) { delete s; }

size_t blab_sampled_node_count(const blab_sampled* s) { return s ? s->field->node_count() : 0; }

size_t blab_sampled_stride(const blab_sampled* s) { return s ? s->field->stride() : 0; }

blab_status blab_sampled_data(const blab_sampled* s, double* out, size_t cap, size_t* count) {
  BLAB_REQUIRE(s, "null pointer");
  return guard([&] {
    const auto d = s->field->data();
    return copy_out(std::vector<double>(d.begin(), d.end()), out, cap, count);
  });
}

blab_status blab_cr_distance(const blab_sampled* a, const blab_sampled* b, int r, double rho, double* out) {
  BLAB_REQUIRE(a && b && out, "null pointer");
  return guard([&] {
    *out = cr_distance(*a->field, *b->field, r, rho);
    return BLAB_OK;
  });
}

blab_status blab_helmholtz_residual(const blab_sampled* s, double* out) {
  BLAB_REQUIRE(s && out, "null pointer");
  return guard([&] {
    *out = helmholtz_residual(*s->field);
    return BLAB_OK;
  });
}

blab_status blab_sampled_to_text(const blab_sampled* s, char** out) {
  BLAB_REQUIRE(s && out, "null pointer");
  return guard([&] {
    *out = copy_string(to_text(*s->field));
    return BLAB_OK;
  });
}

blab_status blab_sampled_from_text(const char* text, blab_sampled** out) {
  BLAB_REQUIRE(text && out, "null pointer");
  return guard([&] {
    *out = new blab_sampled{std::make_shared<const LocalizedField>(from_text(text))};
    return BLAB_OK;
  });
}

blab_status blab_config_validate_text(const char* text, char** report) {
  BLAB_REQUIRE(text && report, "null pointer");
  return guard([&] {
    const ValidationReport r = validate_config_text(text);
    *report = copy_string(report_text(r));
    return r.ok ? BLAB_OK : fail(BLAB_ERR_CONFIG, r.errors.empty() ? "invalid config" : r.errors.front());
  });
}

blab_status blab_config_validate_file(const char* path, char** report) {
  BLAB_REQUIRE(path && report, "null pointer");
  return guard([&] {
    const ValidationReport r = validate_config_file(path);
    *report = copy_string(report_text(r));
    return r.ok ? BLAB_OK : fail(BLAB_ERR_CONFIG, r.errors.empty() ? "invalid config" : r.errors.front());
  });
}

blab_status blab_config_hash(const char* text, char** hash) {
  BLAB_REQUIRE(text && hash, "null pointer");
  return guard([&] {
    *hash = copy_string(parse_config(text).hash);
    return BLAB_OK;
  });
}

blab_status blab_run_text(const char* text, const char* out_dir, const uint64_t* seed_override, int threads,
                          char** headline, char** record) {
  BLAB_REQUIRE(text, "text is null");
  return guard([&] {
    std::optional<std::uint64_t> seed;
    if (seed_override) seed = *seed_override;
    return run_config(parse_config(text, seed), out_dir, threads, headline, record);
  });
}

blab_status blab_run_file(const char* path, const char* out_dir, const uint64_t* seed_override, int threads,
                          char** headline, char** record) {
  BLAB_REQUIRE(path, "path is null");
  return guard([&] {
    std::optional<std::uint64_t> seed;
    if (seed_override) seed = *seed_override;
    return run_config(load_config(path, seed), out_dir, threads, headline, record);
  });
}

blab_status blab_check_outputs(const char* dir, const char* config_path, char** report) {
  BLAB_REQUIRE(dir && report, "null pointer");
  return guard([&] {
    std::optional<std::string> cfg;
    if (config_path) cfg = config_path;
    const CheckReport r = check_outputs(dir, cfg);
    std::ostringstream os;
    os << (r.ok ? "ok " : "mismatch ") << r.hash << "\n";
    for (const auto& p : r.problems) os << "problem: " << p << "\n";
    *report = copy_string(os.str());
    return r.ok ? BLAB_OK : fail(BLAB_ERR_CONFIG, r.problems.front());
  });
}

blab_status blab_list_experiments(char** out) {
  BLAB_REQUIRE(out, "out is null");
  return guard([&] {
    *out = copy_string(experiment_catalogue());
    return BLAB_OK;
  });
}

}  // extern "C"
