#include "austere/sampling.hpp"

namespace austere {

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double radical_inverse(std::uint64_t i, int base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (i > 0) {
        r += f * double(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

}  // namespace

HaltonSampler::HaltonSampler(int dim, std::uint64_t seed) : dim_(dim) {
    index_ = 64 + (seed * 7919) % 100003;
}

Eigen::VectorXd HaltonSampler::next() {
    Eigen::VectorXd p(dim_);
    for (int d = 0; d < dim_; ++d) p(d) = radical_inverse(index_, kPrimes[d % 12]);
    ++index_;
    return p;
}

std::vector<std::pair<double, double>> sample_surface_points(const SampleBox& box, int count,
                                                             std::uint64_t seed) {
    HaltonSampler hs(2, seed);
    std::vector<std::pair<double, double>> out;
    out.reserve(count);
    double du = (box.u_max - box.u_min), dv = (box.v_max - box.v_min);
    for (int i = 0; i < count; ++i) {
        Eigen::VectorXd p = hs.next();
        out.emplace_back(box.u_min + box.margin * du + p(0) * du * (1 - 2 * box.margin),
                         box.v_min + box.margin * dv + p(1) * dv * (1 - 2 * box.margin));
    }
    return out;
}

std::vector<MPoint> sample_m_points(const SampleBox& box, int count, int n, std::uint64_t seed) {
    HaltonSampler hs(2 + (n - 2), seed);
    std::vector<MPoint> out;
    out.reserve(count);
    double du = (box.u_max - box.u_min), dv = (box.v_max - box.v_min);
    for (int i = 0; i < count; ++i) {
        Eigen::VectorXd p = hs.next();
        MPoint mp;
        mp.u = box.u_min + box.margin * du + p(0) * du * (1 - 2 * box.margin);
        mp.v = box.v_min + box.margin * dv + p(1) * dv * (1 - 2 * box.margin);
        mp.t.resize(n - 2);
        for (int j = 0; j < n - 2; ++j) mp.t(j) = box.t_box * (2 * p(2 + j) - 1);
        out.push_back(std::move(mp));
    }
    return out;
}

}  // namespace austere
