#include "twocap/medium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace twocap {

namespace {

double wrap_unit(double t) {
  double r = t - std::floor(t);
  return r >= 1.0 ? 0.0 : r;
}

}  // namespace

long half_cell_index(double s) {
  const double t = 2.0 * s;
  const double r = std::nearbyint(t);
  if (std::abs(t - r) <= 1e-9 * std::max(1.0, std::abs(t))) return static_cast<long>(r);
  return static_cast<long>(std::floor(t));
}

Checkerboard::Checkerboard(double alpha, double beta, double delta, Vec2 tau)
    : alpha_(alpha), beta_(beta), delta_(delta), tau_{wrap_unit(tau.x), wrap_unit(tau.y)} {
  if (!(alpha > 0.0)) throw std::invalid_argument("checkerboard alpha must be positive");
  if (!(beta >= alpha)) throw std::invalid_argument("checkerboard requires alpha <= beta");
  if (!(delta > 0.0)) throw std::invalid_argument("checkerboard period must be positive");
}

Checkerboard Checkerboard::uniform(double c) { return Checkerboard(c, c, 1.0); }

bool Checkerboard::is_alpha(Vec2 p) const {
  if (alpha_ == beta_) return true;
  const long px = half_cell_index(p.x / delta_ + tau_.x);
  const long py = half_cell_index(p.y / delta_ + tau_.y);
  return diagonal_half_cell(px, py);
}

Vec2 Checkerboard::nearest_center(Vec2 near, bool alpha_cells) const {
  const long p0 = half_cell_index(near.x / delta_ + tau_.x);
  const long q0 = half_cell_index(near.y / delta_ + tau_.y);
  auto centre = [&](long p, long q) {
    return Vec2{((double(p) + 0.5) / 2.0 - tau_.x) * delta_, ((double(q) + 0.5) / 2.0 - tau_.y) * delta_};
  };
  Vec2 best{};
  double best_d = std::numeric_limits<double>::infinity();
  bool found_home = false;
  for (long p = p0 - 2; p <= p0 + 2; ++p) {
    for (long q = q0 - 2; q <= q0 + 2; ++q) {
      if (diagonal_half_cell(p, q) != alpha_cells) continue;
      const Vec2 c = centre(p, q);
      const double d = norm(c - near);
      const bool home = (p == p0 && q == q0);
      // Strictly closer wins; on an exact tie the containing half-cell wins.
      if (d < best_d || (d == best_d && home && !found_home)) {
        best = c;
        best_d = d;
        found_home = home;
      }
    }
  }
  return best;
}

Vec2 Checkerboard::alpha_cell_center(Vec2 near) const { return nearest_center(near, true); }

Vec2 Checkerboard::beta_cell_center(Vec2 near) const { return nearest_center(near, false); }

Vec2 Checkerboard::cell_corner(Vec2 near) const {
  auto snap = [&](double v, double t) {
    const double k = std::nearbyint((v / delta_ + t) * 2.0);
    return (k / 2.0 - t) * delta_;
  };
  return {snap(near.x, tau_.x), snap(near.y, tau_.y)};
}

Checkerboard Checkerboard::scaled_values(double t) const {
  return Checkerboard(alpha_ * t, beta_ * t, delta_, tau_);
}

Checkerboard Checkerboard::scaled_period(double t) const {
  return Checkerboard(alpha_, beta_, delta_ * t, tau_);
}

ScaleSchedule ScaleSchedule::power(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("power schedule requires eta in (0, 1]");
  return ScaleSchedule(Kind::power, eta);
}

ScaleSchedule ScaleSchedule::inverse_log() { return ScaleSchedule(Kind::inverse_log, 0.0); }

ScaleSchedule ScaleSchedule::linear_times_log() { return ScaleSchedule(Kind::linear_times_log, 0.0); }

ScaleSchedule ScaleSchedule::proportional(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("proportional schedule requires C > 0");
  return ScaleSchedule(Kind::proportional, c);
}

ScaleSchedule ScaleSchedule::table(std::vector<std::pair<double, double>> eps_delta) {
  for (const auto& [e, d] : eps_delta)
    if (!(e > 0.0 && e < 1.0) || !(d > 0.0))
      throw std::invalid_argument("table schedule entries need eps in (0,1) and delta > 0");
  std::sort(eps_delta.begin(), eps_delta.end());
  ScaleSchedule s(Kind::table, 0.0);
  s.table_ = std::move(eps_delta);
  return s;
}

ScaleSchedule ScaleSchedule::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string tail = colon == std::string::npos ? std::string() : text.substr(colon + 1);
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("malformed number in schedule: " + s);
    return v;
  };
  if (head == "power") return power(number(tail));
  if (head == "inverse_log") return inverse_log();
  if (head == "linear_times_log") return linear_times_log();
  if (head == "proportional") return proportional(number(tail));
  if (head == "table") {
    std::vector<std::pair<double, double>> rows;
    std::stringstream ss(tail);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto slash = item.find('/');
      if (slash == std::string::npos) throw std::invalid_argument("table entries are eps/delta pairs");
      rows.emplace_back(number(item.substr(0, slash)), number(item.substr(slash + 1)));
    }
    return table(std::move(rows));
  }
  throw std::invalid_argument("unknown schedule kind: " + text);
}

std::string ScaleSchedule::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::power: os << "power:" << param_; break;
    case Kind::inverse_log: os << "inverse_log"; break;
    case Kind::linear_times_log: os << "linear_times_log"; break;
    case Kind::proportional: os << "proportional:" << param_; break;
    case Kind::table:
      os << "table:";
      for (std::size_t i = 0; i < table_.size(); ++i)
        os << (i ? "," : "") << table_[i].first << "/" << table_[i].second;
      break;
  }
  return os.str();
}

double ScaleSchedule::delta(double eps) const {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("schedule needs eps in (0, 1)");
  const double le = std::abs(std::log(eps));
  switch (kind_) {
    case Kind::power: return std::pow(eps, param_);
    case Kind::inverse_log: return 1.0 / le;
    case Kind::linear_times_log: return eps * le;
    case Kind::proportional: return param_ * eps;
    case Kind::table:
      for (const auto& [e, d] : table_)
        if (std::abs(e - eps) <= 1e-12 * eps) return d;
      throw std::invalid_argument("eps not present in schedule table");
  }
  return 0.0;
}

ScaleSchedule::Lambda ScaleSchedule::lambda() const {
  switch (kind_) {
    case Kind::power: return {param_, false};
    case Kind::inverse_log: return {0.0, false};
    case Kind::linear_times_log: return {1.0, false};
    case Kind::proportional: return {1.0, false};
    case Kind::table: {
      if (table_.size() < 2) throw std::invalid_argument("table schedule needs at least two entries");
      const auto& a = table_[0];
      const auto& b = table_[1];
      const double slope = (std::log(b.second) - std::log(a.second)) / (std::log(b.first) - std::log(a.first));
      return {std::clamp(slope, 0.0, 1.0), true};
    }
  }
  return {0.0, false};
}

}  // namespace twocap
