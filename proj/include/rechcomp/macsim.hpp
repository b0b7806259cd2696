#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "rechcomp/codesign.hpp"

namespace rechcomp {

struct ChannelModel {
  enum class Mode { Ideal, Rayleigh } mode = Mode::Ideal;
  double fade_floor = 1e-3;  // |h| below this logs a deep-fade event
  std::uint64_t seed = 0;
};

struct NoiseModel {
  double sigma_z = 0;  // total complex noise variance sigma_z^2 per slot
  std::uint64_t seed = 0;
};

// Channel-inversion coefficient p = conj(h) / |h|^2, so h * p = 1.
std::complex<double> power_control(std::complex<double> h);

struct SimOutput {
  Eigen::VectorXcd y;   // one sample per slot
  int deep_fades = 0;   // fades below the floor (inversion still applied)
};

// Received sequence for one level tuple: per slot, the sum over nodes of the
// selected constellation point masked by the code, plus circular complex
// noise of total variance sigma_z^2 (sigma_z^2/2 per real component).
// Draw order per slot: fading per node in node order (Rayleigh mode only),
// then one noise sample.
SimOutput simulate(const Eigen::VectorXcd& x, const CodeMatrix& code,
                   const std::vector<int>& levels, int level_count,
                   const ChannelModel& channel, const NoiseModel& noise,
                   std::mt19937_64& rng);

// Convenience overload deriving the stream from the two model seeds.
SimOutput simulate(const Eigen::VectorXcd& x, const CodeMatrix& code,
                   const std::vector<int>& levels, int level_count,
                   const ChannelModel& channel, const NoiseModel& noise);

// SNR definition 20*log10(|x| / sigma_z), inverted for sigma.
double sigma_from_snr(const Eigen::VectorXcd& x, double snr_db);
double snr_from_sigma(const Eigen::VectorXcd& x, double sigma_z);

}  // namespace rechcomp
