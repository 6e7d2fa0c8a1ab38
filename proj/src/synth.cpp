#include "m2s2/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "m2s2/error.hpp"

namespace m2s2 {

namespace {

class Builder {
 public:
  Builder(const SynthParams& p) : p_(p), rng_(p.seed), jitter_(0.0, p.noise > 0 ? p.noise : 1.0) {}

  void add(double x, double y, Label c) {
    if (p_.noise > 0) {
      x += jitter_(rng_);
      y += jitter_(rng_);
    }
    coords_.push_back(x);
    coords_.push_back(y);
    labels_.push_back(c);
  }

  // `count` points at equal angular steps over [a0, a0 + span).
  void arc(double cx, double cy, double a0, double span, int count, Label c) {
    for (int i = 0; i < count; ++i) {
      const double a = a0 + span * i / count;
      add(cx + p_.radius * std::cos(a), cy + p_.radius * std::sin(a), c);
    }
  }

  // Fibonacci spiral: near uniform disk coverage.
  void disk(double cx, double cy, double r, int count, Label c) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double rho = r * std::sqrt((i + 0.5) / count);
      add(cx + rho * std::cos(i * golden), cy + rho * std::sin(i * golden), c);
    }
  }

  std::mt19937_64& rng() { return rng_; }

  LabelledPointCloud finish() { return LabelledPointCloud(2, std::move(coords_), labels_); }

 private:
  const SynthParams& p_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> jitter_;
  std::vector<double> coords_;
  std::vector<Label> labels_;
};

constexpr double kTau = 2.0 * std::numbers::pi;

}  // namespace

const std::vector<std::string>& synth_fixture_names() {
  static const std::vector<std::string> names = {"circle",           "filled_circle",
                                                 "colocated_circles", "dichromatic_arcs",
                                                 "trichromatic_arcs", "uniform_noise"};
  return names;
}

LabelledPointCloud synthesize(const std::string& fixture, const SynthParams& params) {
  if (!(params.radius > 0.0)) throw InputError("radius must be positive");
  if (params.points < 1) throw InputError("point count must be positive");
  if (params.noise < 0.0) throw InputError("noise must be >= 0");
  if (params.colors < 0 || params.colors > 64) throw InputError("colors must be in 0..64");
  const double r = params.radius;
  Builder b(params);

  if (fixture == "circle") {
    b.arc(0, 0, 0, kTau, params.points, 0);
  } else if (fixture == "filled_circle") {
    if (params.fill_points < 1) throw InputError("fill point count must be positive");
    for (int i = 0; i < 3; ++i) b.arc(3.0 * r * i, 0, 0, kTau, params.points, 0);
    b.disk(0, 0, 0.85 * r, params.fill_points, 1);
  } else if (fixture == "colocated_circles") {
    const int colors = params.colors ? params.colors : 2;
    const double step = kTau / (params.points * colors);
    for (int c = 0; c < colors; ++c) b.arc(0, 0, c * step, kTau, params.points, static_cast<Label>(c));
  } else if (fixture == "dichromatic_arcs") {
    const int half = params.points / 2;
    b.arc(0, 0, 0, std::numbers::pi, half, 0);
    b.arc(0, 0, std::numbers::pi, std::numbers::pi, params.points - half, 1);
  } else if (fixture == "trichromatic_arcs") {
    for (int c = 0; c < 3; ++c) {
      const int count = params.points / 3 + (c < params.points % 3 ? 1 : 0);
      b.arc(0, 0, c * kTau / 3, kTau / 3, count, static_cast<Label>(c));
    }
  } else if (fixture == "uniform_noise") {
    const int colors = params.colors ? params.colors : 2;
    std::uniform_real_distribution<double> u(0.0, 2.0 * r);
    std::uniform_int_distribution<int> pick(0, colors - 1);
    for (int i = 0; i < params.points; ++i) {
      const double x = u(b.rng());
      const double y = u(b.rng());
      const auto c = static_cast<Label>(pick(b.rng()));
      b.add(x, y, c);
    }
  } else {
    throw InputError("unknown fixture '" + fixture + "'");
  }
  return b.finish();
}

}  // namespace m2s2
