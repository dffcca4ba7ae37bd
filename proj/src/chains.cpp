#include "tpng/chains.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tpng/sampling.hpp"

namespace tpng {

IndicatorChain::IndicatorChain(int j_min, int j_max) : lo_(j_min) {
  if (j_max < j_min) throw std::invalid_argument("empty site window");
  bits_.assign(static_cast<std::size_t>(j_max - j_min) + 1, 0);
}

std::uint8_t IndicatorChain::at(int j) const {
  if (!contains(j)) throw std::out_of_range("site outside window");
  return bits_[static_cast<std::size_t>(j - lo_)];
}

void IndicatorChain::set(int j, std::uint8_t v) {
  if (!contains(j)) throw std::out_of_range("site outside window");
  bits_[static_cast<std::size_t>(j - lo_)] = v ? 1 : 0;
}

std::uint64_t IndicatorChain::ones() const {
  std::uint64_t n = 0;
  for (std::uint8_t b : bits_) n += b;
  return n;
}

std::optional<int> rightmost_one(const IndicatorChain& chain) {
  for (int j = chain.j_max(); j >= chain.j_min(); --j)
    if (chain.at(j)) return j;
  return std::nullopt;
}

std::optional<int> kth_rightmost_one(const IndicatorChain& chain, int k) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  for (int j = chain.j_max(); j >= chain.j_min(); --j)
    if (chain.at(j) && --k == 0) return j;
  return std::nullopt;
}

int riders_above(const IndicatorChain& chain, int m) {
  int n = 0;
  for (int j = m + 1; j <= chain.j_max(); ++j) n += chain.at(j);
  return -n;
}

BlockingParams BlockingParams::from_rates(double t, double lambda, double eps) {
  if (!(t > 0.0 && t < 1.0)) throw std::domain_error("t must lie strictly inside (0,1)");
  if (!(lambda > 0.0) || !(eps > 0.0)) throw std::domain_error("rates must be positive");
  return {t, std::log(lambda / eps) / std::log(t)};
}

double BlockingParams::site_probability(int j) const {
  if (!(t > 0.0 && t < 1.0)) throw std::domain_error("t must lie strictly inside (0,1)");
  const double w = (static_cast<double>(j) + c) * std::log(t);
  return 1.0 / (1.0 + std::exp(-w));
}

IndicatorChain v_init(const std::vector<std::uint8_t>& marks, int n_bottom) {
  if (n_bottom < 0) throw std::invalid_argument("negative bottom count");
  const int j_min = marks.empty() ? 1 : 1 - static_cast<int>(marks.size());
  IndicatorChain chain(std::min(j_min, 0), std::max(n_bottom, 0));
  for (std::size_t r = 0; r < marks.size(); ++r)
    chain.set(-static_cast<int>(r), marks[r] ? 1 : 0);
  return chain;
}

IndicatorChain u_init(const BlockingParams& params, int j_min, int j_max, Rng& rng) {
  IndicatorChain chain(j_min, j_max);
  for (int j = j_min; j <= j_max; ++j)
    chain.set(j, rng.uniform() < params.site_probability(j) ? 1 : 0);
  return chain;
}

IndicatorChain u_init_dominating(const IndicatorChain& v, const BlockingParams& params,
                                 Rng& rng) {
  IndicatorChain u(v.j_min(), v.j_max());
  const double p0 = params.site_probability(0);
  for (int j = u.j_min(); j <= u.j_max(); ++j) {
    if (v.at(j)) {
      u.set(j, 1);
      continue;
    }
    const double p = j <= 0 ? p0 : 0.0;
    const double q = params.site_probability(j);
    if (q < p) throw std::logic_error("marginal fails to dominate");
    u.set(j, rng.uniform() < (q - p) / (1.0 - p) ? 1 : 0);
  }
  return u;
}

StepResult v_step(IndicatorChain& chain, int m, double t, Rng& rng) {
  const std::uint8_t a = chain.at(m);
  const std::uint8_t b = chain.at(m + 1);
  ++chain.steps;
  StepResult res;
  if (a == b) return res;
  if (a == 0) {
    res.rule = 2;
    res.jumped = true;
    chain.set(m, 1);
    chain.set(m + 1, 0);
    return res;
  }
  res.rule = 3;
  res.coin_used = true;
  if (rng.uniform() < t) {
    res.jumped = true;
    chain.set(m, 0);
    chain.set(m + 1, 1);
  }
  return res;
}

CoupledResult coupled_step(IndicatorChain& u, IndicatorChain& v, int m, double t, Rng& rng) {
  const std::uint8_t vm = v.at(m), vn = v.at(m + 1);
  const std::uint8_t um = u.at(m), un = u.at(m + 1);
  if (um < vm || un < vn) throw std::logic_error("domination lost before step");
  ++u.steps;
  ++v.steps;

  CoupledResult res;
  const bool v_coin = vm == 1 && vn == 0;
  const bool u_coin = um == 1 && un == 0;
  bool right = false;
  if (v_coin || u_coin) {
    res.coin_used = true;
    right = rng.uniform() < t;
  }
  if (vm == 0 && vn == 1) {
    v.set(m, 1);
    v.set(m + 1, 0);
    res.v_jumped = true;
  } else if (v_coin && right) {
    v.set(m, 0);
    v.set(m + 1, 1);
    res.v_jumped = true;
  }
  if (um == 0 && un == 1) {
    u.set(m, 1);
    u.set(m + 1, 0);
    res.u_jumped = true;
  } else if (u_coin && right) {
    u.set(m, 0);
    u.set(m + 1, 1);
    res.u_jumped = true;
  }
  if (u.at(m) < v.at(m) || u.at(m + 1) < v.at(m + 1))
    throw std::logic_error("domination lost after step");
  return res;
}

double reversibility_check(const BlockingParams& params, int m) {
  const double qm = params.site_probability(m);
  const double qn = params.site_probability(m + 1);
  return std::abs(params.t * qm * (1.0 - qn) - (1.0 - qm) * qn);
}

TripleRun triple_run(double lambda, double eps, double t, const Box& box, std::uint64_t seed) {
  if (!(lambda > 0.0) || !(eps >= 0.0)) throw std::domain_error("invalid rates");
  if (!(t >= 0.0 && t < 1.0)) throw std::domain_error("t must lie in [0,1)");

  TripleRun run;
  run.alpha_params = ModelParams::stationary(lambda, t, box, seed);
  run.omega_params = run.alpha_params;
  run.omega_params.source_rate = lambda + eps;
  run.omega_params.sink_rate = 0.0;

  CoupledPair pair = couple_pair(run.alpha_params, run.omega_params);
  run.alpha = std::move(pair.lower);
  run.layer = std::move(pair.layer);
  run.meetings = meeting_sequence(run.layer);

  int min_label = 0, max_label = 0;
  std::size_t n_left = 0;
  for (const ScpPath& p : run.layer.paths) {
    min_label = std::min(min_label, p.label);
    max_label = std::max(max_label, p.label);
    if (p.label <= 0) ++n_left;
  }

  Rng marks_rng(derive_seed(seed, stream_key::chain));
  const std::vector<bool> marks = thin_marks(n_left, lambda / (lambda + eps), marks_rng);
  run.sink_kept.assign(marks.begin(), marks.end());
  run.v0 = v_init(run.sink_kept, max_label);

  int kept = 0;
  for (std::size_t r = 0; r < run.sink_kept.size(); ++r)
    if (run.sink_kept[r]) run.carriers0[-static_cast<int>(r)] = -(kept++);
  run.carriers = run.carriers0;

  run.v = run.v0;
  std::optional<int> rightmost = rightmost_one(run.v);

  Rng coin_rng(derive_seed(seed, stream_key::chain ^ 1));
  run.trace.reserve(run.meetings.size());
  for (const Meeting& mt : run.meetings) {
    const int m = mt.lower_label;
    if (m <= run.v.j_min() || m + 1 >= run.v.j_max()) run.edge_contact = true;
    const bool occ_m = run.carriers.count(m) > 0;
    const bool occ_n = run.carriers.count(m + 1) > 0;
    if (occ_m != (run.v.at(m) == 1) || occ_n != (run.v.at(m + 1) == 1))
      throw std::logic_error("carrier map and site chain disagree");

    const StepResult res = v_step(run.v, m, t, coin_rng);
    if (res.jumped) {
      if (res.rule == 2) {
        run.carriers[m] = run.carriers.at(m + 1);
        run.carriers.erase(m + 1);
        if (rightmost && *rightmost == m + 1) rightmost = m;
      } else {
        run.carriers[m + 1] = run.carriers.at(m);
        run.carriers.erase(m);
        if (rightmost && *rightmost == m) rightmost = m + 1;
      }
    }
    run.trace.push_back({mt.sigma, m, res.rule, res.jumped,
                         rightmost ? *rightmost : no_rider});
  }

  std::uint64_t occupied = run.carriers.size();
  if (occupied != run.v.ones()) throw std::logic_error("occupation count drifted");
  for (const auto& [site, label] : run.carriers) {
    (void)label;
    if (!run.v.at(site)) throw std::logic_error("carrier on an empty site");
  }
  return run;
}

std::vector<Point> spliced_path(const TripleRun& run, int h_label) {
  int site = -1;
  bool found = false;
  for (const auto& [s, label] : run.carriers0)
    if (label == h_label) {
      site = s;
      found = true;
    }
  if (!found) throw std::domain_error("rider label never enters");

  // replay the trace, collecting this rider's trade points
  std::map<int, int> carriers = run.carriers0;
  std::vector<std::pair<Point, int>> trades; // (trade point, new site)
  std::size_t mi = 0;
  for (const TripleStep& st : run.trace) {
    const Meeting& mt = run.meetings[mi++];
    if (!st.jumped) continue;
    const int from = st.rule == 2 ? st.m + 1 : st.m;
    const int to = st.rule == 2 ? st.m : st.m + 1;
    const int moved = carriers.at(from);
    carriers.erase(from);
    carriers[to] = moved;
    if (moved == h_label) trades.emplace_back(mt.at, to);
  }

  std::vector<Point> out;
  const ScpPath* cur = &run.layer.path_of(site);
  std::size_t cursor = 0;
  auto append_until = [&](const Point& stop) {
    while (cursor < cur->points.size()) {
      const Point& p = cur->points[cursor];
      out.push_back(p);
      ++cursor;
      if (p.x == stop.x && p.y == stop.y) return;
    }
    throw std::logic_error("trade point missing from carrying path");
  };
  for (const auto& [at, to] : trades) {
    append_until(at);
    cur = &run.layer.path_of(to);
    cursor = 0;
    while (cursor < cur->points.size() &&
           !(cur->points[cursor].x == at.x && cur->points[cursor].y == at.y))
      ++cursor;
    if (cursor == cur->points.size())
      throw std::logic_error("trade point missing from receiving path");
    ++cursor; // the shared point is already emitted
  }
  while (cursor < cur->points.size()) out.push_back(cur->points[cursor++]);

  for (std::size_t i = 1; i < out.size(); ++i) {
    const bool share_axis = out[i - 1].x == out[i].x || out[i - 1].y == out[i].y;
    if (!share_axis || out[i].x < out[i - 1].x || out[i].y < out[i - 1].y)
      throw std::logic_error("spliced path is not an up-right staircase");
  }
  return out;
}

std::string trace_csv(const TripleRun& run) {
  std::ostringstream os;
  os << "step,sigma,m,rule,jump\n";
  os.precision(17);
  for (std::size_t i = 0; i < run.trace.size(); ++i) {
    const TripleStep& st = run.trace[i];
    os << i + 1 << ',' << st.sigma << ',' << st.m << ',' << st.rule << ','
       << (st.jumped ? 1 : 0) << '\n';
  }
  return os.str();
}

} // namespace tpng
