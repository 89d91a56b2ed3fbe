#include "act/eval.hpp"

#include "act/error.hpp"
#include "act/text.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <tuple>

namespace act {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });

  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::Parameter, "spearman: vectors differ in length");
  if (x.size() < 3) throw Error(ErrorCode::Parameter, "spearman: need at least 3 pairs");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::isnan(x[i]) || std::isnan(y[i])) throw Error(ErrorCode::Parameter, "spearman: NaN input");

  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(rx.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0)
    throw Error(ErrorCode::UndefinedCorrelation, "spearman: a vector is constant");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double cronbach_alpha(const Eigen::MatrixXd& ratings) {
  std::vector<Eigen::Index> complete;
  for (Eigen::Index r = 0; r < ratings.rows(); ++r)
    if (!ratings.row(r).array().isNaN().any()) complete.push_back(r);
  const auto k = static_cast<Eigen::Index>(complete.size());
  const Eigen::Index items = ratings.cols();
  if (k < 2 || items < 2)
    throw Error(ErrorCode::Parameter, "cronbach_alpha: need at least 2 complete raters and 2 items");

  auto variance = [](const Eigen::VectorXd& v) {
    const double mean = v.mean();
    return (v.array() - mean).square().sum() / static_cast<double>(v.size() - 1);
  };
  double part_variance = 0.0;
  Eigen::VectorXd totals = Eigen::VectorXd::Zero(items);
  for (auto r : complete) {
    const Eigen::VectorXd row = ratings.row(r).transpose();
    part_variance += variance(row);
    totals += row;
  }
  const double total_variance = variance(totals);
  if (total_variance == 0.0) throw Error(ErrorCode::UndefinedAlpha, "cronbach_alpha: zero total variance");
  const double kd = static_cast<double>(k);
  return kd / (kd - 1.0) * (1.0 - part_variance / total_variance);
}

// ---------------------------------------------------------------------------
// Ratings

RatingsTable::RatingsTable(std::vector<Rating> rows) : rows_(std::move(rows)) {
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  std::map<std::string, std::map<std::string, std::pair<double, int>>> sums;
  for (const auto& r : rows_) {
    if (!(r.value >= kMin && r.value <= kMax))
      throw Error(ErrorCode::Schema, "rating for '" + r.track_id + "' outside [1, 9]");
    if (!seen.emplace(r.track_id, r.rater_id, r.scale).second)
      throw Error(ErrorCode::Schema, "duplicate rating of '" + r.track_id + "' by '" + r.rater_id +
                                         "' on '" + r.scale + "'");
    if (std::find(scales_.begin(), scales_.end(), r.scale) == scales_.end()) scales_.push_back(r.scale);
    auto& [sum, count] = sums[r.scale][r.track_id];
    sum += r.value;
    ++count;
  }
  for (const auto& [scale, tracks] : sums)
    for (const auto& [track, acc] : tracks) aggregated_[scale][track] = acc.first / acc.second;
}

Eigen::MatrixXd RatingsTable::rater_matrix(const std::string& scale) const {
  std::map<std::string, Eigen::Index> raters, tracks;
  for (const auto& r : rows_) {
    if (r.scale != scale) continue;
    raters.emplace(r.rater_id, 0);
    tracks.emplace(r.track_id, 0);
  }
  Eigen::Index i = 0;
  for (auto& [_, idx] : raters) idx = i++;
  i = 0;
  for (auto& [_, idx] : tracks) idx = i++;
  Eigen::MatrixXd out = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(raters.size()),
                                                  static_cast<Eigen::Index>(tracks.size()),
                                                  std::numeric_limits<double>::quiet_NaN());
  for (const auto& r : rows_)
    if (r.scale == scale) out(raters[r.rater_id], tracks[r.track_id]) = r.value;
  return out;
}

RatingsTable read_ratings(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Schema, "ratings: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "track_id\trater_id\tscale\tvalue")
    throw Error(ErrorCode::Schema, "ratings: expected header 'track_id<TAB>rater_id<TAB>scale<TAB>value'");
  std::vector<Rating> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = text::split(line, '\t');
    auto bad = [&] { return Error(ErrorCode::Schema, "ratings line " + std::to_string(line_no) + " is malformed"); };
    if (f.size() != 4 || f[0].empty() || f[2].empty()) throw bad();
    double value = 0.0;
    std::size_t used = 0;
    try {
      value = std::stod(f[3], &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != f[3].size()) throw bad();
    rows.push_back({f[0], f[1], text::normalize(f[2]), value});
  }
  return RatingsTable(std::move(rows));
}

PredictionReport evaluate_predictions(const ScalePredictions& predictions, const RatingsTable& ratings,
                                      const std::string& method, const std::string& k) {
  PredictionReport report;
  report.metadata["method"] = method;
  report.metadata["k"] = k;
  for (const auto& [scale, by_track] : predictions) {
    auto rated = ratings.aggregated().find(scale);
    if (rated == ratings.aggregated().end()) continue;
    std::vector<double> x, y;
    for (const auto& [track, value] : by_track) {
      auto it = rated->second.find(track);
      if (it == rated->second.end()) continue;
      x.push_back(value);
      y.push_back(it->second);
    }
    if (x.size() < 3)
      throw Error(ErrorCode::Coverage, "scale '" + scale + "': only " + std::to_string(x.size()) +
                                           " tracks shared by predictions and ratings");
    report.rows.push_back({scale, method, k, spearman_rho(x, y), x.size()});
  }
  if (report.rows.empty())
    throw Error(ErrorCode::Coverage, "no scale is shared by predictions and ratings");
  return report;
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::Parameter, "median of an empty list");
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace act
