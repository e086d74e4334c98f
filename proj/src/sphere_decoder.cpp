#include "mimosd/sphere_decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mimosd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// Largest metric the leaves of a subtree could still improve, given that the
// bits at positions >= fixed_from_bit carry the labels currently on the path.
// Bits below fixed_from_bit are free inside the subtree, so all of their
// counter metrics count; a fixed bit only counts when its label differs from
// the ML label. Before the first leaf there is no bound at all.
double SphereDecoder::bound_for_subtree(int fixed_from_bit) const {
  if (!have_ml_) {
    return kInf;
  }
  double bound = ml_metric_;
  for (int k = 0; k < fixed_from_bit; ++k) {
    bound = std::max(bound, counter_metrics_[k]);
  }
  for (int k = fixed_from_bit; k < num_bits_; ++k) {
    if (path_labels_[k] != ml_labels_[k]) {
      bound = std::max(bound, counter_metrics_[k]);
    }
  }
  return bound;
}

void SphereDecoder::process_leaf(double metric) {
  if (metric < ml_metric_ || !have_ml_) {
    if (have_ml_) {
      // The displaced ML hypothesis becomes the counter-hypothesis of every
      // bit whose label changes.
      for (int k = 0; k < num_bits_; ++k) {
        if (path_labels_[k] != ml_labels_[k]) {
          counter_metrics_[k] = std::min(counter_metrics_[k], ml_metric_);
        }
      }
    }
    ml_metric_ = metric;
    std::copy(path_labels_.begin(), path_labels_.end(), ml_labels_.begin());
    have_ml_ = true;
    if (metric_clip_window_ != kInf) {
      const double cap = ml_metric_ + metric_clip_window_;
      for (double& c : counter_metrics_) {
        c = std::min(c, cap);
      }
    }
  } else {
    for (int k = 0; k < num_bits_; ++k) {
      if (path_labels_[k] != ml_labels_[k] && metric < counter_metrics_[k]) {
        counter_metrics_[k] = metric;
      }
    }
  }
}

void SphereDecoder::expand(int antenna, double parent_metric) {
  const Constellation& c = *constellation_;
  cplx residual = (*y_)[antenna];
  for (int j = antenna + 1; j < num_antennas_; ++j) {
    residual -= (*r_)(antenna, j) * c.points[chosen_index_[j]];
  }
  const double diag = (*r_)(antenna, antenna).real();

  std::vector<Child>& children = children_[antenna];
  for (int idx = 0; idx < c.order; ++idx) {
    children[idx].increment = std::norm(residual - diag * c.points[idx]);
    children[idx].index = idx;
  }
  std::sort(children.begin(), children.end(), [](const Child& a, const Child& b) {
    if (a.increment != b.increment) return a.increment < b.increment;
    return a.index < b.index;
  });

  const int first_bit = antenna * bits_per_symbol_;
  for (const Child& child : children) {
    const double metric = parent_metric + child.increment;
    ++visited_;
    // Bits of this antenna and below are still free in any sibling's
    // subtree, so this bound holds for all remaining (larger) increments.
    if (metric > bound_for_subtree(first_bit + bits_per_symbol_)) {
      break;
    }
    chosen_index_[antenna] = child.index;
    for (int b = 0; b < bits_per_symbol_; ++b) {
      path_labels_[first_bit + b] =
          static_cast<uint8_t>((child.index >> (bits_per_symbol_ - 1 - b)) & 1);
    }
    if (antenna == 0) {
      process_leaf(metric);
    } else if (metric <= bound_for_subtree(first_bit)) {
      expand(antenna - 1, metric);
    }
  }
}

SoftDetectionResult SphereDecoder::detect(const DetectionProblem& problem) {
  if (problem.constellation == nullptr) {
    throw std::invalid_argument("detect: constellation must be set");
  }
  const Constellation& c = *problem.constellation;
  const int m = static_cast<int>(problem.r.cols());
  if (problem.r.rows() != problem.r.cols() || m < 1) {
    throw dimension_error("detect: r must be square");
  }
  if (static_cast<int>(problem.y.size()) != m) {
    throw dimension_error("detect: y length must equal antenna count");
  }
  if (!(problem.sigma2 > 0.0)) {
    throw std::invalid_argument("detect: sigma2 must be positive");
  }
  if (!(problem.clip > 0.0)) {
    throw std::invalid_argument("detect: clip must be positive or infinite");
  }

  r_ = &problem.r;
  y_ = &problem.y;
  constellation_ = &c;
  num_antennas_ = m;
  bits_per_symbol_ = c.bits_per_symbol;
  num_bits_ = m * c.bits_per_symbol;
  const double noise_scale = 2.0 * problem.sigma2;
  metric_clip_window_ = std::isinf(problem.clip) ? kInf : noise_scale * problem.clip;

  chosen_index_.assign(m, 0);
  path_labels_.assign(num_bits_, 0);
  ml_labels_.assign(num_bits_, 0);
  counter_metrics_.assign(num_bits_, kInf);
  ml_metric_ = kInf;
  have_ml_ = false;
  visited_ = 0;
  children_.resize(m);
  for (auto& scratch : children_) {
    scratch.resize(c.order);
  }

  expand(m - 1, 0.0);

  SoftDetectionResult result;
  result.llrs.resize(num_bits_);
  for (int k = 0; k < num_bits_; ++k) {
    double magnitude = (counter_metrics_[k] - ml_metric_) / noise_scale;
    if (!std::isinf(problem.clip)) {
      magnitude = std::min(magnitude, problem.clip);
    }
    result.llrs[k] = ml_labels_[k] ? magnitude : -magnitude;
  }
  result.visited_nodes = visited_;
  result.ml_metric = ml_metric_;
  return result;
}

SoftDetectionResult detect(const DetectionProblem& problem) {
  SphereDecoder decoder;
  return decoder.detect(problem);
}

}  // namespace mimosd
