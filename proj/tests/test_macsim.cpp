#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rechcomp/macsim.hpp"
#include "rechcomp/rng.hpp"

using namespace rechcomp;

TEST_CASE("snr to sigma conversion") {
  Eigen::VectorXcd unit(1);
  unit << 1.0;
  CHECK(sigma_from_snr(unit, 0.0) == doctest::Approx(1.0).epsilon(1e-15));

  Eigen::VectorXcd four(1);
  four << 4.0;
  CHECK(sigma_from_snr(four, 20.0) == doctest::Approx(0.4).epsilon(1e-15));

  Eigen::VectorXcd x(3);
  x << std::complex<double>(1, 2), std::complex<double>(-0.5, 0.25), 3.0;
  for (double snr : {-7.5, 0.0, 3.25, 12.0, 35.0}) {
    double sigma = sigma_from_snr(x, snr);
    CHECK(std::abs(snr_from_sigma(x, sigma) - snr) <= 1e-12);
  }

  Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(2);
  CHECK_THROWS_AS(sigma_from_snr(zero, 10.0), std::domain_error);
  CHECK_THROWS_AS(snr_from_sigma(x, 0.0), std::domain_error);
}

TEST_CASE("power control inverts the channel") {
  for (std::complex<double> h : {std::complex<double>(0.3, -1.2),
                                 std::complex<double>(-2.0, 0.0),
                                 std::complex<double>(1e-4, 1e-4)}) {
    std::complex<double> prod = h * power_control(h);
    CHECK(std::abs(prod - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS(power_control({0.0, 0.0}), std::domain_error);
}

TEST_CASE("noiseless received samples follow the masked sums") {
  // Two nodes, two levels each, two slots with a hand-built code.
  Eigen::VectorXcd x(4);
  x << std::complex<double>(1, 1), std::complex<double>(-1, 0),
      std::complex<double>(0, 2), std::complex<double>(0.5, -0.5);
  CodeMatrix code = CodeMatrix::zeros(4, 2);
  code.bits(0, 0) = 1;  // node 0 level 0 in slot 0
  code.bits(1, 1) = 1;  // node 0 level 1 in slot 1
  code.bits(2, 0) = 1;  // node 1 level 0 in slot 0
  code.bits(3, 0) = 1;
  code.bits(3, 1) = 1;  // node 1 level 1 in both slots

  ChannelModel channel;
  NoiseModel silent{0.0, 0};
  std::mt19937_64 rng(9);

  SimOutput a = simulate(x, code, {0, 1}, 2, channel, silent, rng);
  CHECK(a.y[0] == x[0] + x[3]);
  CHECK(a.y[1] == x[3]);

  SimOutput b = simulate(x, code, {1, 0}, 2, channel, silent, rng);
  CHECK(b.y[0] == x[2]);
  CHECK(b.y[1] == x[1]);

  CHECK_THROWS_AS(simulate(x, code, {0, 1, 0}, 2, channel, silent, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate(x, code, {0, 5}, 2, channel, silent, rng),
                  std::out_of_range);
}

TEST_CASE("inverted rayleigh fading with zero noise matches the ideal channel") {
  Eigen::VectorXcd x(4);
  x << std::complex<double>(0.7, -0.1), std::complex<double>(-0.3, 0.9),
      std::complex<double>(1.1, 0.2), std::complex<double>(0.0, -1.4);
  CodeMatrix code = CodeMatrix::bit_split(2, 2, 2);
  NoiseModel silent{0.0, 0};

  ChannelModel ideal;
  ChannelModel faded;
  faded.mode = ChannelModel::Mode::Rayleigh;

  for (int t = 0; t < 32; ++t) {
    std::vector<int> levels = {t & 1, (t >> 1) & 1};
    std::mt19937_64 r1 = make_engine({5, static_cast<std::uint64_t>(t)});
    std::mt19937_64 r2 = make_engine({5, static_cast<std::uint64_t>(t)});
    SimOutput yi = simulate(x, code, levels, 2, ideal, silent, r1);
    SimOutput yf = simulate(x, code, levels, 2, faded, silent, r2);
    REQUIRE(yi.y.size() == yf.y.size());
    for (int l = 0; l < yi.y.size(); ++l) CHECK(yi.y[l] == yf.y[l]);
  }
}

TEST_CASE("deep fades are counted but still inverted") {
  Eigen::VectorXcd x(2);
  x << 1.0, -1.0;
  CodeMatrix code = CodeMatrix::all_ones(2, 3);
  ChannelModel hard;
  hard.mode = ChannelModel::Mode::Rayleigh;
  hard.fade_floor = 10.0;  // |h| < 10 is essentially certain
  NoiseModel silent{0.0, 0};
  std::mt19937_64 rng = make_engine({13});
  SimOutput out = simulate(x, code, {0, 0}, 1, hard, silent, rng);
  CHECK(out.deep_fades == 2 * 3);
  CHECK(out.y[0] == x[0] + x[1]);
}

TEST_CASE("noise is circular with the requested total variance") {
  Eigen::VectorXcd x(1);
  x << 0.0;
  CodeMatrix code = CodeMatrix::all_ones(1, 1);
  ChannelModel channel;
  NoiseModel noise{1.0, 0};
  std::mt19937_64 rng = make_engine({2024});

  const int reps = 100000;
  double power = 0;
  double re = 0, im = 0;
  for (int t = 0; t < reps; ++t) {
    SimOutput out = simulate(x, code, {0}, 1, channel, noise, rng);
    power += std::norm(out.y[0]);
    re += out.y[0].real();
    im += out.y[0].imag();
  }
  power /= reps;
  CHECK(power == doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::abs(re / reps) < 0.05);
  CHECK(std::abs(im / reps) < 0.05);
}

TEST_CASE("seeded convenience overload reproduces itself") {
  Eigen::VectorXcd x(2);
  x << std::complex<double>(0.2, 0.4), std::complex<double>(-1.0, 0.1);
  CodeMatrix code = CodeMatrix::all_ones(2, 2);
  ChannelModel channel;
  channel.seed = 7;
  NoiseModel noise{0.5, 3};

  SimOutput a = simulate(x, code, {0, 0}, 1, channel, noise);
  SimOutput b = simulate(x, code, {0, 0}, 1, channel, noise);
  REQUIRE(a.y.size() == b.y.size());
  for (int l = 0; l < a.y.size(); ++l) CHECK(a.y[l] == b.y[l]);

  NoiseModel other{0.5, 4};
  SimOutput c = simulate(x, code, {0, 0}, 1, channel, other);
  bool same = true;
  for (int l = 0; l < a.y.size(); ++l) same = same && a.y[l] == c.y[l];
  CHECK(!same);
}
