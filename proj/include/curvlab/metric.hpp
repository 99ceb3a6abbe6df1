#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "curvlab/manifold.hpp"

namespace curvlab {

/// Point-dependent symmetric bilinear form, represented by an ambient N x N
/// Gram matrix restricted to the tangent space. The reference round metrics
/// have Gram = identity; deformed metrics return nontrivial closures.
class MetricField {
 public:
  using GramFn = std::function<Mat(const Vec&)>;

  MetricField() = default;
  MetricField(const SphereProduct* domain, std::string descriptor, GramFn gram,
              std::shared_ptr<const void> keepalive = nullptr)
      : domain_(domain),
        descriptor_(std::move(descriptor)),
        gram_(std::move(gram)),
        keepalive_(std::move(keepalive)) {}

  const SphereProduct& domain() const { return *domain_; }
  const std::string& descriptor() const { return descriptor_; }

  Mat gram(const Vec& p) const { return gram_(p); }
  double inner(const Vec& p, const Vec& a, const Vec& b) const { return a.dot(gram_(p) * b); }
  double norm(const Vec& p, const Vec& a) const { return std::sqrt(std::max(0.0, inner(p, a, a))); }

  /// Identity-Gram metric (the induced round metric of the embedding).
  static MetricField reference(const SphereProduct* domain,
                               std::shared_ptr<const void> keepalive = nullptr) {
    const Eigen::Index n = domain->ambient_dim();
    return MetricField(domain, "reference", [n](const Vec&) { return Mat::Identity(n, n); },
                       std::move(keepalive));
  }

 private:
  const SphereProduct* domain_ = nullptr;
  std::string descriptor_;
  GramFn gram_;
  std::shared_ptr<const void> keepalive_;
};

}  // namespace curvlab
