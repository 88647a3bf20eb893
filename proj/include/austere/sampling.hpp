#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "austere/ruled.hpp"

namespace austere {

// Seeded Halton sequence; the seed selects a deterministic index offset so
// reports are reproducible bit-for-bit given (seed, config).
class HaltonSampler {
  public:
    HaltonSampler(int dim, std::uint64_t seed);
    Eigen::VectorXd next();  // point in [0,1)^dim

  private:
    int dim_;
    std::uint64_t index_;
};

struct SampleBox {
    double u_min = -0.8, u_max = 0.8;
    double v_min = -0.8, v_max = 0.8;
    double t_box = 1.5;  // |t_j| <= t_box
    double s_box = 1.0;
    double margin = 0.05;  // keep FD stencils inside the domain
};

std::vector<std::pair<double, double>> sample_surface_points(const SampleBox& box, int count,
                                                             std::uint64_t seed);

std::vector<MPoint> sample_m_points(const SampleBox& box, int count, int n, std::uint64_t seed);

}  // namespace austere
