#include "nodal/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nodal/continuation.hpp"
#include "nodal/eigensolver.hpp"
#include "nodal/errors.hpp"
#include "nodal/geometry.hpp"
#include "nodal/microlocal.hpp"
#include "nodal/specfun.hpp"
#include "nodal/zeros.hpp"

namespace nodal::commands {

namespace {

using json = nlohmann::json;
using cplx = std::complex<double>;
using eigensolver::BoundaryCondition;
using eigensolver::EigenPair;
using geometry::AnalyticClosedCurve;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct Setup {
  json cfg;
  std::string hash;
  AnalyticClosedCurve domain;
  bool is_disc = false;
  bool is_stadium = false;
  std::vector<double> junctions;
  AnalyticClosedCurve H;
  bool has_H = false;
  BoundaryCondition bc = BoundaryCondition::Neumann;
  int nq = 256;
};

Setup parse_setup(const std::string& config_json) {
  Setup s;
  s.cfg = json::parse(config_json);
  s.hash = config_hash(config_json);
  const auto& dom = s.cfg.at("domain");
  const std::string kind = dom.at("kind").get<std::string>();
  if (kind == "disc") {
    s.domain = geometry::make_circle(1.0);
    s.is_disc = true;
  } else if (kind == "ellipse") {
    s.domain = geometry::make_ellipse(dom.at("a").get<double>(),
                                      dom.at("b").get<double>());
  } else if (kind == "stadium") {
    auto st = geometry::make_stadium(dom.at("half").get<double>(),
                                     dom.at("radius").get<double>());
    s.domain = st.curve;
    s.junctions = st.junctions;
    s.is_stadium = true;
  } else {
    throw ConfigError("unknown domain kind: " + kind);
  }
  if (s.cfg.contains("interior")) {
    const auto& in = s.cfg.at("interior");
    if (in.at("kind").get<std::string>() != "circle")
      throw ConfigError("only circular interior curves are supported");
    s.H = geometry::make_circle(in.at("r0").get<double>(),
                                in.value("cx", 0.0), in.value("cy", 0.0));
    s.has_H = true;
  }
  const std::string bc = s.cfg.value("bc", std::string("neumann"));
  if (bc == "neumann")
    s.bc = BoundaryCondition::Neumann;
  else if (bc == "dirichlet")
    s.bc = BoundaryCondition::Dirichlet;
  else
    throw ConfigError("bc must be neumann or dirichlet");
  s.nq = s.cfg.value("nq", 256);
  return s;
}

// dist(H, domain boundary) by coarse double minimization (both curves are
// smooth and convex; 256x256 is ample for a validity check).
double curve_distance(const AnalyticClosedCurve& H,
                      const AnalyticClosedCurve& bdry) {
  double best = 1e300;
  for (int i = 0; i < 256; ++i) {
    const auto p = geometry::eval_curve(H, kTwoPi * i / 256.0);
    for (int j = 0; j < 256; ++j) {
      const auto q = geometry::eval_curve(bdry, kTwoPi * j / 256.0);
      best = std::min(best, std::hypot(p.x.real() - q.x.real(),
                                       p.y.real() - q.y.real()));
    }
  }
  return best;
}

// The continuation strip requirement 2 eps sup|q_H'| < dist(H, bdry) is a
// config invariant: violations must exit with the config-error code, not
// surface later as a numerical failure.
void validate_eps(const Setup& s, double eps) {
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  if (!s.has_H) throw ConfigError("this command needs an interior curve");
  double sup_speed = 0.0;
  for (int i = 0; i < 256; ++i)
    sup_speed = std::max(sup_speed, geometry::speed(s.H, kTwoPi * i / 256.0));
  const double dist = curve_distance(s.H, s.domain);
  if (2.0 * eps * sup_speed >= dist)
    throw ConfigError("eps outside the certified strip: 2 eps sup|q'| = " +
                      fmt(2.0 * eps * sup_speed) + " >= dist = " + fmt(dist));
}

std::vector<EigenPair> solve_pairs(const Setup& s) {
  std::vector<EigenPair> pairs;
  if (s.cfg.contains("modes")) {
    if (!s.is_disc) throw ConfigError("mode lists are disc-only");
    for (const auto& mn : s.cfg.at("modes"))
      pairs.push_back(eigensolver::disc_eigenpair(
          mn.at(0).get<int>(), mn.at(1).get<int>(), s.bc,
          eigensolver::Parity::Even, s.nq));
  } else if (s.cfg.contains("window")) {
    const auto& w = s.cfg.at("window");
    pairs = eigensolver::eig_scan(s.domain, w.at(0).get<double>(),
                                  w.at(1).get<double>(), s.bc, s.nq);
  } else {
    throw ConfigError("config needs either \"modes\" or \"window\"");
  }
  return pairs;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const Setup& s,
            const std::string& header)
      : path_(path) {
    body_ << "# version=" << version() << "\n";
    body_ << "# config_hash=" << s.hash << "\n";
    body_ << header << "\n";
  }
  void row(const std::vector<double>& vals) {
    for (size_t i = 0; i < vals.size(); ++i)
      body_ << (i ? "," : "") << fmt(vals[i]);
    body_ << "\n";
  }
  void comment(const std::string& line) { body_ << "# " << line << "\n"; }
  void flush() {
    std::ofstream f(path_, std::ios::binary);
    f << body_.str();
  }

 private:
  std::filesystem::path path_;
  std::ostringstream body_;
};

CommandResult cmd_solve(const Setup& s, const std::filesystem::path& out) {
  auto pairs = solve_pairs(s);
  json manifest;
  manifest["command"] = "solve";
  manifest["version"] = version();
  manifest["config_hash"] = s.hash;
  manifest["pairs"] = json::array();
  CommandResult res;
  for (size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    json pj;
    pj["lambda"] = p.lambda;
    pj["h"] = p.h;
    pj["bc"] = p.bc == BoundaryCondition::Neumann ? "neumann" : "dirichlet";
    pj["nq"] = p.nq;
    pj["dominant_mode"] = p.dominant_mode;
    json re = json::array(), im = json::array();
    for (const auto& z : p.trace) {
      re.push_back(z.real());
      im.push_back(z.imag());
    }
    pj["trace_re"] = std::move(re);
    pj["trace_im"] = std::move(im);
    char name[32];
    std::snprintf(name, sizeof(name), "pair_%03zu.json", i);
    const std::string text = pj.dump();
    std::ofstream(out / name, std::ios::binary) << text << "\n";
    json entry;
    entry["file"] = name;
    entry["lambda"] = p.lambda;
    entry["h"] = p.h;
    char hh[24];
    std::snprintf(hh, sizeof(hh), "%016llx",
                  static_cast<unsigned long long>(fnv1a(text)));
    entry["hash"] = hh;
    manifest["pairs"].push_back(entry);
    res.outputs.push_back(name);
  }
  std::ofstream(out / "manifest.json", std::ios::binary)
      << manifest.dump(2) << "\n";
  res.outputs.push_back("manifest.json");
  res.message = "solved " + std::to_string(pairs.size()) + " pairs";
  return res;
}

CommandResult cmd_count(const Setup& s, const std::filesystem::path& out) {
  const double eps = s.cfg.at("eps").get<double>();
  validate_eps(s, eps);
  auto pairs = solve_pairs(s);
  CsvWriter csv(out / "count.csv", s,
                "lambda,h,n_real,n_complex,two_f,two_boundary_ratio,"
                "n_real_over_lambda");
  int violations = 0;
  for (const auto& p : pairs) {
    auto rep = zeros::theorem1_chain(p, s.H, eps);
    csv.row({rep.lambda, rep.h, static_cast<double>(rep.n_real),
             static_cast<double>(rep.n_complex), rep.two_f,
             2.0 * rep.boundary_ratio, rep.n_real / rep.lambda});
    if (!rep.chain_ok) ++violations;
  }
  csv.flush();
  CommandResult res;
  res.outputs.push_back("count.csv");
  if (violations > 0) {
    res.exit_code = 4;
    res.message = "chain inequality violated for " +
                  std::to_string(violations) + " of " +
                  std::to_string(pairs.size()) + " pairs (csv written)";
  } else {
    res.message = "chain holds for all " + std::to_string(pairs.size()) +
                  " pairs";
  }
  return res;
}

CommandResult cmd_qer(const Setup& s, const std::filesystem::path& out,
                      bool long_running) {
  if (s.is_stadium && !long_running)
    throw ConfigError("stadium qer is gated behind --long-running");
  const double eps = s.cfg.at("eps").get<double>();
  validate_eps(s, eps);
  auto pairs = solve_pairs(s);
  CsvWriter csv(out / "qer.csv", s, "lambda,h,lhs,rhs,rel_diff,limit");
  CommandResult res;
  res.outputs.push_back("qer.csv");

  if (s.cfg.value("cutoff", std::string("plateau")) == "zero") {
    for (const auto& p : pairs) csv.row({p.lambda, p.h, 0.0, 0.0, 0.0, 0.0});
    csv.flush();
    res.message = "zero cutoff: all-zero columns";
    return res;
  }

  auto chi = microlocal::tube_cutoff(eps);
  const int n_s = s.cfg.value("n_s", 16);
  auto sym = microlocal::glancing_symbol(s.H, s.domain, chi, eps, n_s);
  const double limit = microlocal::liouville_limit(sym, s.domain);
  const auto& grid_cfg = s.cfg.value("grid", json::object());
  auto grid = microlocal::make_tube_grid(s.H, s.domain, eps,
                                         grid_cfg.value("n_re", 512),
                                         grid_cfg.value("n_im", 33));
  std::vector<microlocal::FaceWindow> wins;
  if (s.is_stadium)
    wins = microlocal::face_windows(s.junctions, s.cfg.value("eps_face", 0.2));

  std::vector<double> drift;
  for (const auto& p : pairs) {
    double lhs = 0.0, rhs = 0.0;
    if (wins.empty()) {
      lhs = microlocal::qer_lhs(p, s.H, grid, chi);
      rhs = microlocal::qer_rhs(p, sym).value;
    } else {
      // Piecewise boundary: premultiply the trace by each face window and
      // sum the windowed forms.
      for (const auto& w : wins) {
        EigenPair wp = p;
        for (int i = 0; i < wp.nq; ++i) wp.trace[i] *= w(kTwoPi * i / wp.nq);
        lhs += microlocal::qer_lhs(wp, s.H, grid, chi);
        rhs += microlocal::qer_rhs(wp, sym).value;
      }
    }
    const double rel = rhs != 0.0 ? std::abs(lhs - rhs) / std::abs(rhs) : 0.0;
    csv.row({p.lambda, p.h, lhs, rhs, rel, limit});
    drift.push_back(limit != 0.0 ? lhs / limit : 0.0);
  }
  if (s.is_stadium) {
    std::string line = "stadium trend (report only, no assertion): lhs/limit =";
    for (double d : drift) line += " " + fmt(d);
    csv.comment(line);
  }
  csv.flush();
  res.message = "qer table with " + std::to_string(pairs.size()) + " rows";
  return res;
}

CommandResult cmd_growth(const Setup& s, const std::filesystem::path& out) {
  const double eps = s.cfg.at("eps").get<double>();
  const double delta = s.cfg.value("delta", 0.0);
  if (delta < 0.0 || delta > eps)
    throw ConfigError("delta must lie in [0, eps]");
  validate_eps(s, eps);
  auto pairs = solve_pairs(s);
  CsvWriter csv(out / "growth.csv", s, "lambda,h,log_max,log_annulus_max");
  std::vector<double> inv_h, logm;
  for (const auto& p : pairs) {
    auto tm = continuation::grauert_max(p, s.H, eps, delta);
    csv.row({p.lambda, p.h, std::log(tm.max_abs), std::log(tm.annulus_max)});
    inv_h.push_back(1.0 / p.h);
    logm.push_back(std::log(tm.max_abs));
  }
  // Expected exponential-rate window from the weight table: the growth rate
  // of max|u^C| lies between min_s S at height eps - delta and max_s S at
  // height eps.
  double m_lo = 1e300, m_hi = 0.0;
  for (int i = 0; i < 128; ++i) {
    const double re = -kPi + kTwoPi * i / 128.0;
    if (eps > delta)
      m_lo = std::min(m_lo, geometry::weight(s.H, s.domain,
                                             cplx(re, eps - delta)));
    m_hi = std::max(m_hi, geometry::weight(s.H, s.domain, cplx(re, eps)));
  }
  if (eps <= delta) m_lo = 0.0;
  double slope = 0.0;
  if (pairs.size() >= 2) {
    const int n = static_cast<int>(inv_h.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
      sx += inv_h[i];
      sy += logm[i];
      sxx += inv_h[i] * inv_h[i];
      sxy += inv_h[i] * logm[i];
    }
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  const bool in_range = slope >= m_lo - 1e-9 && slope <= m_hi + 1e-9;
  csv.comment("slope=" + fmt(slope) + " m_lo=" + fmt(m_lo) +
              " m_hi=" + fmt(m_hi) + " in_range=" + (in_range ? "1" : "0"));
  // Height consistency: at leading order M_H(eps) is (mean speed of H) * eps
  // with an O(eps^3) defect; for unit-speed curves this is eps itself.
  const double vbar = geometry::curve_length(s.H) / kTwoPi;
  csv.comment("m_hi_minus_speed_eps=" + fmt(m_hi - vbar * eps));
  csv.flush();
  CommandResult res;
  res.outputs.push_back("growth.csv");
  res.message = "growth slope " + fmt(slope) + " vs [" + fmt(m_lo) + ", " +
                fmt(m_hi) + "]";
  return res;
}

CommandResult cmd_weight(const Setup& s, const std::filesystem::path& out) {
  const double eps = s.cfg.at("eps").get<double>();
  validate_eps(s, eps);
  const auto& grid_cfg = s.cfg.value("grid", json::object());
  const int n_re = grid_cfg.value("n_re", 64);
  const int n_im = grid_cfg.value("n_im", 9);
  CsvWriter csv(out / "weight.csv", s, "re,im,S");
  for (int j = 0; j < n_im; ++j) {
    const double im = eps * j / (n_im - 1);
    for (int i = 0; i < n_re; ++i) {
      const double re = -kPi + kTwoPi * i / n_re;
      csv.row({re, im, im == 0.0 ? 0.0
                                 : geometry::weight(s.H, s.domain, cplx(re, im))});
    }
  }
  csv.flush();
  CommandResult res;
  res.outputs.push_back("weight.csv");
  res.message = "weight table " + std::to_string(n_re) + "x" +
                std::to_string(n_im);
  return res;
}

CommandResult cmd_decay(const Setup& s, const std::filesystem::path& out) {
  if (!s.has_H) throw ConfigError("decay needs an interior curve");
  auto pairs = solve_pairs(s);
  if (pairs.empty()) throw ConfigError("decay needs a non-empty family");
  auto oval = zeros::make_oval(s.cfg.value("oval_eps", 0.15));
  std::vector<double> Rs;
  for (const auto& r : s.cfg.at("R_list")) Rs.push_back(r.get<double>());
  auto tab = microlocal::residual_decay(pairs, s.H, oval, Rs);
  CsvWriter csv(out / "decay.csv", s, "R,c,intercept,norms...");
  std::string lams = "lambdas:";
  for (const auto& p : pairs) lams += " " + fmt(p.lambda);
  csv.comment(lams);
  for (const auto& f : tab.fits) {
    std::vector<double> row = {f.R, f.c, f.intercept};
    row.insert(row.end(), f.norms.begin(), f.norms.end());
    csv.row(row);
  }
  csv.flush();
  CommandResult res;
  res.outputs.push_back("decay.csv");
  res.message = "decay table for " + std::to_string(Rs.size()) + " radii";
  return res;
}

}  // namespace

const char* version() { return "0.1.0"; }

std::string config_hash(const std::string& config_json) {
  const std::string canon = json::parse(config_json).dump();
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(canon)));
  return buf;
}

CommandResult run_command(const std::string& cmd, const std::string& config_json,
                          const std::string& out_dir, bool long_running) {
  CommandResult res;
  try {
    Setup s = parse_setup(config_json);
    std::filesystem::path out(out_dir);
    std::filesystem::create_directories(out);
    if (cmd == "solve") return cmd_solve(s, out);
    if (cmd == "count") return cmd_count(s, out);
    if (cmd == "qer") return cmd_qer(s, out, long_running);
    if (cmd == "growth") return cmd_growth(s, out);
    if (cmd == "weight") return cmd_weight(s, out);
    if (cmd == "decay") return cmd_decay(s, out);
    throw ConfigError("unknown command: " + cmd);
  } catch (const json::exception& e) {
    res.exit_code = 2;
    res.message = std::string("config error: ") + e.what();
  } catch (const ConfigError& e) {
    res.exit_code = 2;
    res.message = std::string("config error: ") + e.what();
  } catch (const std::exception& e) {
    res.exit_code = 3;
    res.message = std::string("numerical failure: ") + e.what();
  }
  return res;
}

}  // namespace nodal::commands
