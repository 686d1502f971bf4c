#pragma once

#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

namespace tryon::core {

using Shape = std::vector<int>;

std::string shape_str(const Shape& s);

// Dense row-major tensor of doubles. Double precision throughout so the
// finite-difference gradient oracles run in float64 without a cast layer.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(Shape shape, double fill = 0.0);

    static Tensor zeros(const Shape& shape) { return Tensor(shape, 0.0); }
    static Tensor full(const Shape& shape, double v) { return Tensor(shape, v); }
    static Tensor from_values(Shape shape, std::vector<double> values);
    static Tensor scalar(double v);

    bool defined() const { return !shape_.empty() || !data_.empty(); }
    int ndim() const { return static_cast<int>(shape_.size()); }
    int dim(int i) const { return shape_[static_cast<size_t>(i)]; }
    int numel() const { return static_cast<int>(data_.size()); }
    const Shape& shape() const { return shape_; }
    bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double& operator[](int i) { return data_[static_cast<size_t>(i)]; }
    double operator[](int i) const { return data_[static_cast<size_t>(i)]; }

    // Indexed accessors for the common ranks.
    double& at(int a) { return data_[static_cast<size_t>(a)]; }
    double at(int a) const { return data_[static_cast<size_t>(a)]; }
    double& at(int a, int b) { return data_[static_cast<size_t>(a * shape_[1] + b)]; }
    double at(int a, int b) const { return data_[static_cast<size_t>(a * shape_[1] + b)]; }
    double& at(int a, int b, int c) {
        return data_[static_cast<size_t>((a * shape_[1] + b) * shape_[2] + c)];
    }
    double at(int a, int b, int c) const {
        return data_[static_cast<size_t>((a * shape_[1] + b) * shape_[2] + c)];
    }
    double& at(int a, int b, int c, int d) {
        return data_[static_cast<size_t>(((a * shape_[1] + b) * shape_[2] + c) * shape_[3] + d)];
    }
    double at(int a, int b, int c, int d) const {
        return data_[static_cast<size_t>(((a * shape_[1] + b) * shape_[2] + c) * shape_[3] + d)];
    }

    void fill(double v);
    Tensor reshaped(Shape new_shape) const;

    bool all_finite() const;
    double min_value() const;
    double max_value() const;
    double sum_value() const;
    double mean_value() const;
    double abs_max() const;

private:
    Shape shape_;
    std::vector<double> data_;
};

// Elementwise helpers on plain tensors (no gradients).
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double s);
double max_abs_diff(const Tensor& a, const Tensor& b);
bool bit_equal(const Tensor& a, const Tensor& b);

}  // namespace tryon::core
