#pragma once

namespace molisac {

/// Physical constants of the microfluidic channel. SI units throughout,
/// receptor concentration in molar.
struct PhysicalParams {
  double diffusion_coeff = 0.0;  // D [m^2/s]
  double flow_velocity = 0.0;    // v [m/s]
  double binding_rate = 0.0;     // k_on [1/(M s)]
  double unbinding_rate = 0.0;   // k_off [1/s]
  double receptor_conc = 0.0;    // c_p [M]
  double spatial_step = 0.0;     // dx [m]
  double time_step = 0.0;        // dt [s]
  int num_states = 0;            // N: transient states, bound state included
};

/// One-step transition probabilities of the discretized transport and
/// reaction dynamics.
struct ElementaryProbs {
  double diffuse = 0.0;  // D*dt/dx^2
  double advect = 0.0;   // v*dt/dx
  double bind = 0.0;     // k_on*c_p*dt
  double unbind = 0.0;   // k_off*dt
};

/// Derives the elementary probabilities from the physical parameters.
/// Rejects parameter sets that yield a negative probability or whose
/// worst-case outgoing mass (2*diffuse + advect + bind at the
/// receiver-adjacent state, or unbind at the bound state) exceeds one.
ElementaryProbs elementary_probs(const PhysicalParams& params);

/// Maps a grid-aligned distance to the 1-based index of the
/// receiver-adjacent free state, r = d/dx + 1. Throws when the distance
/// does not sit on the spatial grid.
int receiver_index(double distance, double spatial_step);

/// Inverse of receiver_index: d = (r - 1)*dx.
double distance_of(int receiver_idx, double spatial_step);

}  // namespace molisac
