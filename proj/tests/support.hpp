#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "mdr/model.hpp"

namespace mdr::test {

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

inline Vector vec(std::initializer_list<double> values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v(i++) = x;
    return v;
}

inline Matrix scalar(double a) { return Matrix::Constant(1, 1, a); }

inline SystemModel scalar_model(double a, double b, double e, double c = 1.0) {
    return {scalar(a), scalar(b), scalar(e), scalar(c)};
}

inline CostSpec scalar_cost(double q, double r_weight, double p_terminal, double ref = 0.0) {
    return {scalar(q), scalar(r_weight), scalar(p_terminal), vec({ref})};
}

inline SystemModel example_a() {
    return {mat({{0.96, 0, 0}, {0, 1, 0.01}, {0, -0.02, 0.99}}), mat({{0}, {0}, {0.01}}), mat({{0}, {0.01}, {0}}),
            mat({{0, 1, 0}})};
}

inline SystemModel example_b() {
    return {mat({{1, 0.01}, {-0.02, 0.99}}), mat({{0}, {0.01}}), mat({{0.01}, {0}}), mat({{1, 0}})};
}

inline ContinuousModel example_d_continuous() {
    return {mat({{-1.76, -1.34}, {2.70, -7.21}}), mat({{0.57}, {0.82}}), mat({{0.98}, {2.26}}), mat({{0, 1}})};
}

/// Q = c_o'c_o, R = I, zero terminal weight and reference.
inline CostSpec selector_cost(const SystemModel& m) {
    return CostSpec::from_selector(m, Matrix::Identity(m.n(), m.n()), Matrix::Zero(m.n(), m.n()), Vector::Zero(m.n()));
}

inline Matrix gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> g;
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
    return m;
}

inline double max_abs_diff(const std::vector<Vector>& a, const std::vector<Vector>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, (a[i] - b[i]).cwiseAbs().maxCoeff());
    return worst;
}

}  // namespace mdr::test
