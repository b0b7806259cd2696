#include "rechcomp/macsim.hpp"

#include <cmath>
#include <stdexcept>

#include "rechcomp/rng.hpp"

namespace rechcomp {

std::complex<double> power_control(std::complex<double> h) {
  double mag2 = std::norm(h);
  if (mag2 == 0.0) throw std::domain_error("cannot invert a zero channel");
  return std::conj(h) / mag2;
}

SimOutput simulate(const Eigen::VectorXcd& x, const CodeMatrix& code,
                   const std::vector<int>& levels, int level_count,
                   const ChannelModel& channel, const NoiseModel& noise,
                   std::mt19937_64& rng) {
  const int k = static_cast<int>(levels.size());
  if (code.rows() != x.size())
    throw std::invalid_argument("code rows do not match modulation vector");
  if (k * level_count != x.size())
    throw std::invalid_argument("tuple arity does not match modulation vector");

  SimOutput out;
  out.y = Eigen::VectorXcd::Zero(code.slots());
  for (int l = 0; l < code.slots(); ++l) {
    std::complex<double> acc = 0;
    for (int node = 0; node < k; ++node) {
      int q = levels[node];
      if (q < 0 || q >= level_count) throw std::out_of_range("level index out of range");
      int idx = node * level_count + q;
      if (channel.mode == ChannelModel::Mode::Rayleigh) {
        // CN(0,1) fade, redrawn per node and slot.  The transmitter applies
        // p = conj(h)/|h|^2, so h cancels algebraically and only the
        // deep-fade bookkeeping depends on the draw.
        std::complex<double> h = standard_complex_normal(rng);
        if (std::abs(h) < channel.fade_floor) ++out.deep_fades;
      }
      if (code.bits(idx, l)) acc += x[idx];
    }
    out.y[l] = acc + noise.sigma_z * standard_complex_normal(rng);
  }
  return out;
}

SimOutput simulate(const Eigen::VectorXcd& x, const CodeMatrix& code,
                   const std::vector<int>& levels, int level_count,
                   const ChannelModel& channel, const NoiseModel& noise) {
  std::mt19937_64 rng = make_engine({channel.seed, noise.seed, 0x6d616373696dULL});
  return simulate(x, code, levels, level_count, channel, noise, rng);
}

double sigma_from_snr(const Eigen::VectorXcd& x, double snr_db) {
  double scale = x.norm();
  if (scale == 0.0) throw std::domain_error("zero modulation vector has no SNR scale");
  return scale * std::pow(10.0, -snr_db / 20.0);
}

double snr_from_sigma(const Eigen::VectorXcd& x, double sigma_z) {
  if (sigma_z <= 0) throw std::domain_error("sigma must be positive");
  return 20.0 * std::log10(x.norm() / sigma_z);
}

}  // namespace rechcomp
