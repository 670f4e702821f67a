#include "nodal/capi.h"

#include <cstring>
#include <string>
#include <vector>

#include "json.hpp"
#include "nodal/commands.hpp"
#include "nodal/continuation.hpp"
#include "nodal/eigensolver.hpp"
#include "nodal/errors.hpp"
#include "nodal/geometry.hpp"

namespace {

using nodal::ConfigError;
using nodal::geometry::AnalyticClosedCurve;

thread_local std::string g_last_error;

int fail(int code, const char* what) {
  g_last_error = what;
  return code;
}

// Exceptions map onto the same codes the batch commands use.
template <typename F>
int guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return NODAL_OK;
  } catch (const nlohmann::json::exception& e) {
    return fail(NODAL_ERR_CONFIG, e.what());
  } catch (const ConfigError& e) {
    return fail(NODAL_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(NODAL_ERR_NUMERIC, e.what());
  }
}

}  // namespace

struct nodal_curve {
  AnalyticClosedCurve curve;
};

struct nodal_pairs {
  std::vector<nodal::eigensolver::EigenPair> pairs;
};

extern "C" {

const char* nodal_version(void) { return nodal::commands::version(); }

const char* nodal_last_error(void) { return g_last_error.c_str(); }

int nodal_curve_create(const char* spec_json, nodal_curve** out) {
  if (!spec_json || !out) return fail(NODAL_ERR_CONFIG, "null argument");
  return guarded([&] {
    const auto spec = nlohmann::json::parse(spec_json);
    const std::string kind = spec.at("kind").get<std::string>();
    AnalyticClosedCurve c;
    if (kind == "disc") {
      c = nodal::geometry::make_circle(1.0);
    } else if (kind == "circle") {
      c = nodal::geometry::make_circle(spec.at("r0").get<double>(),
                                       spec.value("cx", 0.0),
                                       spec.value("cy", 0.0));
    } else if (kind == "ellipse") {
      c = nodal::geometry::make_ellipse(spec.at("a").get<double>(),
                                        spec.at("b").get<double>());
    } else if (kind == "stadium") {
      c = nodal::geometry::make_stadium(spec.at("half").get<double>(),
                                        spec.at("radius").get<double>())
              .curve;
    } else {
      throw ConfigError("unknown curve kind: " + kind);
    }
    *out = new nodal_curve{std::move(c)};
  });
}

void nodal_curve_destroy(nodal_curve* c) { delete c; }

int nodal_curve_length(const nodal_curve* c, double* out) {
  if (!c || !out) return fail(NODAL_ERR_CONFIG, "null argument");
  return guarded([&] { *out = nodal::geometry::curve_length(c->curve); });
}

int nodal_solve_window(const nodal_curve* domain, double k_lo, double k_hi,
                       int bc, int nq, nodal_pairs** out) {
  if (!domain || !out) return fail(NODAL_ERR_CONFIG, "null argument");
  if (bc != NODAL_BC_NEUMANN && bc != NODAL_BC_DIRICHLET)
    return fail(NODAL_ERR_CONFIG, "bad boundary condition selector");
  return guarded([&] {
    auto v = nodal::eigensolver::eig_scan(
        domain->curve, k_lo, k_hi,
        bc == NODAL_BC_NEUMANN
            ? nodal::eigensolver::BoundaryCondition::Neumann
            : nodal::eigensolver::BoundaryCondition::Dirichlet,
        nq);
    *out = new nodal_pairs{std::move(v)};
  });
}

int nodal_disc_modes(const int* m, const int* n, int count, int bc, int nq,
                     nodal_pairs** out) {
  if (!m || !n || !out || count <= 0)
    return fail(NODAL_ERR_CONFIG, "null or empty mode list");
  if (bc != NODAL_BC_NEUMANN && bc != NODAL_BC_DIRICHLET)
    return fail(NODAL_ERR_CONFIG, "bad boundary condition selector");
  return guarded([&] {
    std::vector<nodal::eigensolver::EigenPair> v;
    for (int i = 0; i < count; ++i)
      v.push_back(nodal::eigensolver::disc_eigenpair(
          m[i], n[i],
          bc == NODAL_BC_NEUMANN
              ? nodal::eigensolver::BoundaryCondition::Neumann
              : nodal::eigensolver::BoundaryCondition::Dirichlet,
          nodal::eigensolver::Parity::Even, nq));
    *out = new nodal_pairs{std::move(v)};
  });
}

void nodal_pairs_destroy(nodal_pairs* p) { delete p; }

int nodal_pairs_size(const nodal_pairs* p, int* out) {
  if (!p || !out) return fail(NODAL_ERR_CONFIG, "null argument");
  *out = static_cast<int>(p->pairs.size());
  return NODAL_OK;
}

static int check_index(const nodal_pairs* p, int i) {
  if (!p) return fail(NODAL_ERR_CONFIG, "null pairs handle");
  if (i < 0 || i >= static_cast<int>(p->pairs.size()))
    return fail(NODAL_ERR_CONFIG, "pair index out of range");
  return NODAL_OK;
}

int nodal_pairs_lambda(const nodal_pairs* p, int i, double* out) {
  if (!out) return fail(NODAL_ERR_CONFIG, "null argument");
  if (int rc = check_index(p, i)) return rc;
  *out = p->pairs[i].lambda;
  return NODAL_OK;
}

int nodal_pairs_h(const nodal_pairs* p, int i, double* out) {
  if (!out) return fail(NODAL_ERR_CONFIG, "null argument");
  if (int rc = check_index(p, i)) return rc;
  *out = p->pairs[i].h;
  return NODAL_OK;
}

int nodal_pair_continue(const nodal_pairs* p, int i, const nodal_curve* H,
                        double re_t, double im_t, double* out_re,
                        double* out_im) {
  if (!H || !out_re || !out_im) return fail(NODAL_ERR_CONFIG, "null argument");
  if (int rc = check_index(p, i)) return rc;
  return guarded([&] {
    const auto v = nodal::continuation::continue_complex(
        p->pairs[i], H->curve, std::complex<double>(re_t, im_t));
    *out_re = v.real();
    *out_im = v.imag();
  });
}

int nodal_weight(const nodal_curve* H, const nodal_curve* bdry, double re_t,
                 double im_t, double* out) {
  if (!H || !bdry || !out) return fail(NODAL_ERR_CONFIG, "null argument");
  return guarded([&] {
    *out = nodal::geometry::weight(H->curve, bdry->curve,
                                   std::complex<double>(re_t, im_t));
  });
}

int nodal_run_command(const char* cmd, const char* config_json,
                      const char* out_dir, int long_running, char* msg_buf,
                      int msg_len) {
  if (!cmd || !config_json || !out_dir)
    return fail(NODAL_ERR_CONFIG, "null argument");
  const auto res = nodal::commands::run_command(cmd, config_json, out_dir,
                                                long_running != 0);
  if (msg_buf && msg_len > 0) {
    std::strncpy(msg_buf, res.message.c_str(), msg_len - 1);
    msg_buf[msg_len - 1] = '\0';
  }
  if (res.exit_code != 0) g_last_error = res.message;
  return res.exit_code;
}

}  // extern "C"
