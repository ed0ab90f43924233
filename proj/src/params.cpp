#include "molisac/params.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace molisac {

ElementaryProbs elementary_probs(const PhysicalParams& params) {
  if (!(params.spatial_step > 0.0) || !(params.time_step > 0.0)) {
    throw std::invalid_argument(
        "elementary_probs: spatial_step and time_step must be positive");
  }
  ElementaryProbs p;
  p.diffuse = params.diffusion_coeff * params.time_step /
              (params.spatial_step * params.spatial_step);
  p.advect = params.flow_velocity * params.time_step / params.spatial_step;
  p.bind = params.binding_rate * params.receptor_conc * params.time_step;
  p.unbind = params.unbinding_rate * params.time_step;

  const auto reject_negative = [](double value, const char* name) {
    if (!(value >= 0.0)) {
      throw std::invalid_argument(std::string("elementary_probs: ") + name +
                                  " probability is negative");
    }
  };
  reject_negative(p.diffuse, "diffusion");
  reject_negative(p.advect, "advection");
  reject_negative(p.bind, "binding");
  reject_negative(p.unbind, "unbinding");

  // Worst-case outgoing mass sits at the receiver-adjacent free state.
  if (2.0 * p.diffuse + p.advect + p.bind > 1.0) {
    throw std::invalid_argument(
        "elementary_probs: outgoing mass 2*p_diff + p_flow + p_bind exceeds 1");
  }
  if (p.unbind > 1.0) {
    throw std::invalid_argument("elementary_probs: p_unbind exceeds 1");
  }
  return p;
}

int receiver_index(double distance, double spatial_step) {
  if (!(spatial_step > 0.0)) {
    throw std::invalid_argument("receiver_index: spatial_step must be positive");
  }
  const double cells = distance / spatial_step;
  const double snapped = std::round(cells);
  if (std::abs(cells - snapped) > 1e-9 * std::max(1.0, std::abs(cells))) {
    throw std::invalid_argument(
        "receiver_index: distance is not aligned to the spatial grid");
  }
  if (snapped < 0.0 || snapped >= static_cast<double>(std::numeric_limits<int>::max() - 1)) {
    throw std::invalid_argument("receiver_index: distance outside the state chain");
  }
  return static_cast<int>(snapped) + 1;
}

double distance_of(int receiver_idx, double spatial_step) {
  if (receiver_idx < 1) {
    throw std::invalid_argument("distance_of: receiver index must be >= 1");
  }
  if (!(spatial_step > 0.0)) {
    throw std::invalid_argument("distance_of: spatial_step must be positive");
  }
  return (receiver_idx - 1) * spatial_step;
}

}  // namespace molisac
