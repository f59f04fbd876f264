#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ranwire {

// Dense row-major 2-D tensor of doubles. Scalars are {1,1}, row vectors
// {1,d}. Values are plain data; gradient tracking lives on the Tape.
struct Tensor {
    std::vector<int> shape;  // always {rows, cols}
    std::vector<double> v;

    Tensor() : shape{0, 0} {}
    Tensor(int rows, int cols) : shape{rows, cols}, v(static_cast<std::size_t>(rows) * cols, 0.0) {}

    static Tensor zeros(int rows, int cols) { return Tensor(rows, cols); }
    static Tensor full(int rows, int cols, double value);
    static Tensor scalar(double value);
    static Tensor from_rows(int rows, int cols, std::vector<double> data);

    int rows() const { return shape[0]; }
    int cols() const { return shape[1]; }
    std::int64_t numel() const { return static_cast<std::int64_t>(rows()) * cols(); }
    double& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols() + c]; }
    double at(int r, int c) const { return v[static_cast<std::size_t>(r) * cols() + c]; }
    bool same_shape(const Tensor& o) const { return shape == o.shape; }
    bool all_finite() const;
};

std::string shape_str(const Tensor& t);

using ValueId = int;

enum class Agg { Sum, Mean };

// Single-owner reverse-mode tape. Operations append entries in execution
// order (so the record is topologically sorted by construction); backward
// visits them exactly once, in reverse, and may run only once per tape.
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    ValueId leaf(Tensor t, bool requires_grad = false);

    ValueId matmul(ValueId a, ValueId b);
    ValueId add(ValueId a, ValueId b);
    ValueId sub(ValueId a, ValueId b);
    ValueId add_rowvec(ValueId a, ValueId row);   // (n,d) + (1,d)
    ValueId mul(ValueId a, ValueId b);            // elementwise
    ValueId mul_rowvec(ValueId a, ValueId row);   // (n,d) * (1,d)
    ValueId div(ValueId a, ValueId b);            // elementwise
    ValueId scale(ValueId a, double c);
    ValueId scale_by(ValueId a, ValueId scalar);  // scalar is (1,1)
    ValueId concat_cols(ValueId a, ValueId b);
    ValueId relu(ValueId a);
    ValueId sigmoid(ValueId a);
    ValueId tanh_act(ValueId a);
    ValueId rsqrt_shift(ValueId a, double eps);   // 1/sqrt(x+eps)
    ValueId gather_rows(ValueId a, std::vector<int> idx);
    // out row r aggregates input rows in sets[r]; empty set gives a zero row
    ValueId aggregate_rows(ValueId a, const std::vector<std::vector<int>>& sets, Agg mode);
    ValueId mean_rows(ValueId a);                 // (n,d) -> (1,d)
    ValueId sum_all(ValueId a);                   // -> (1,1)
    ValueId mse_loss(ValueId pred, const Tensor& target);
    // mean negative log-likelihood over rows; labels index columns
    ValueId softmax_cross_entropy(ValueId logits, const std::vector<int>& labels);

    // Accumulates gradients into every requires_grad value reachable from
    // `loss`, which must be scalar. A second call throws.
    void backward(ValueId loss);

    const Tensor& val(ValueId id) const { return entries_[id].value; }
    // Zero tensor when the value never received gradient.
    const Tensor& grad(ValueId id);
    bool requires_grad(ValueId id) const { return entries_[id].requires_grad; }
    std::size_t size() const { return entries_.size(); }

private:
    struct Entry {
        Tensor value;
        Tensor grad;
        bool requires_grad = false;
        std::function<void(Tape&)> backprop;  // empty for leaves / no-grad results
    };

    ValueId push(Tensor value, bool requires_grad, std::function<void(Tape&)> backprop);
    Tensor& grad_buf(ValueId id);

    std::vector<Entry> entries_;
    bool backward_done_ = false;
};

// Max over coordinates of |analytic - numeric| / max(|analytic|, |numeric|,
// 1e-8), with numeric gradients from central differences of `f` at `x`.
// `f` builds a scalar loss for a given input leaf.
double finite_diff_check(const std::function<ValueId(Tape&, ValueId)>& f, const Tensor& x,
                         double eps = 1e-6);

}  // namespace ranwire
