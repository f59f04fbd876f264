#include "ranwire/tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace ranwire {

Tensor Tensor::full(int rows, int cols, double value) {
    Tensor t(rows, cols);
    for (auto& x : t.v) x = value;
    return t;
}

Tensor Tensor::scalar(double value) { return full(1, 1, value); }

Tensor Tensor::from_rows(int rows, int cols, std::vector<double> data) {
    if (static_cast<std::int64_t>(data.size()) != static_cast<std::int64_t>(rows) * cols)
        throw std::invalid_argument("Tensor::from_rows: data size does not match shape");
    Tensor t;
    t.shape = {rows, cols};
    t.v = std::move(data);
    return t;
}

bool Tensor::all_finite() const {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

std::string shape_str(const Tensor& t) {
    return "(" + std::to_string(t.rows()) + "," + std::to_string(t.cols()) + ")";
}

namespace {
[[noreturn]] void shape_error(const char* op, const Tensor& a, const Tensor& b) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch " + shape_str(a) + " vs " +
                                shape_str(b));
}
}  // namespace

ValueId Tape::push(Tensor value, bool requires_grad, std::function<void(Tape&)> backprop) {
    entries_.push_back({std::move(value), Tensor(), requires_grad, std::move(backprop)});
    return static_cast<ValueId>(entries_.size() - 1);
}

Tensor& Tape::grad_buf(ValueId id) {
    Entry& e = entries_[id];
    if (e.grad.numel() == 0) e.grad = Tensor::zeros(e.value.rows(), e.value.cols());
    return e.grad;
}

const Tensor& Tape::grad(ValueId id) { return grad_buf(id); }

ValueId Tape::leaf(Tensor t, bool requires_grad) { return push(std::move(t), requires_grad, {}); }

ValueId Tape::matmul(ValueId a, ValueId b) {
    const Tensor& A = val(a);
    const Tensor& B = val(b);
    if (A.cols() != B.rows()) shape_error("matmul", A, B);
    const int n = A.rows(), k = A.cols(), m = B.cols();
    Tensor out(n, m);
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < k; ++t) {
            const double av = A.at(i, t);
            if (av == 0.0) continue;
            for (int j = 0; j < m; ++j) out.at(i, j) += av * B.at(t, j);
        }
    const bool rg = requires_grad(a) || requires_grad(b);
    const ValueId id = push(std::move(out), rg, {});
    if (rg)
        entries_[id].backprop = [a, b, id](Tape& t) {
            const Tensor& g = t.entries_[id].grad;
            const Tensor& A = t.val(a);
            const Tensor& B = t.val(b);
            if (t.requires_grad(a)) {
                Tensor& ga = t.grad_buf(a);  // g . B^T
                for (int i = 0; i < A.rows(); ++i)
                    for (int j = 0; j < B.cols(); ++j) {
                        const double gv = g.at(i, j);
                        if (gv == 0.0) continue;
                        for (int r = 0; r < A.cols(); ++r) ga.at(i, r) += gv * B.at(r, j);
                    }
            }
            if (t.requires_grad(b)) {
                Tensor& gb = t.grad_buf(b);  // A^T . g
                for (int i = 0; i < A.rows(); ++i)
                    for (int r = 0; r < A.cols(); ++r) {
                        const double av = A.at(i, r);
                        if (av == 0.0) continue;
                        for (int j = 0; j < B.cols(); ++j) gb.at(r, j) += av * g.at(i, j);
                    }
            }
        };
    return id;
}

ValueId Tape::add(ValueId a, ValueId b) {
    const Tensor& A = val(a);
    const Tensor& B = val(b);
    if (!A.same_shape(B)) shape_error("add", A, B);
    Tensor out = A;
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += B.v[i];
    const bool rg = requires_grad(a) || requires_grad(b);
    const ValueId id = push(std::move(out), rg, {});
    if (rg)
        entries_[id].backprop = [a, b, id](Tape& t) {
            const Tensor& g = t.entries_[id].grad;
            if (t.requires_grad(a)) {
                Tensor& ga = t.grad_buf(a);
                for (std::size_t i = 0; i < g.v.size(); ++i) ga.v[i] += g.v[i];
            }
            if (t.requires_grad(b)) {
                Tensor& gb = t.grad_buf(b);
                for (std::size_t i = 0; i < g.v.size(); ++i) gb.v[i] += g.v[i];
            }
        };
    return id;
}

ValueId Tape::sub(ValueId a, ValueId b) {
    const Tensor& A = val(a);
    const Tensor& B = val(b);
    if (!A.same_shape(B)) shape_error("sub", A, B);
    Tensor out = A;
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] -= B.v[i];
    const bool rg = requires_grad(a) || requires_grad(b);
    const ValueId id = push(std::move(out), rg, {});
    if (rg)
        entries_[id].backprop = [a, b, id](Tape& t) {
            const Tensor& g = t.entries_[id].grad;
            if (t.requires_grad(a)) {
                Tensor& ga = t.grad_buf(a);
                for (std::size_t i = 0; i < g.v.size(); ++i) ga.v[i] += g.v[i];
            }
            if (t.requires_grad(b)) {
                Tensor& gb = t.grad_buf(b);
                for (std::size_t i = 0; i < g.v.size(); ++i) gb.v[i] -= g.v[i];
            }
        };
    return id;
}

ValueId Tape::add_rowvec(ValueId a, ValueId row) {
    const Tensor& A = val(a);
    const Tensor& R = val(row);
    if (R.rows() != 1 || R.cols() != A.cols()) shape_error("add_rowvec", A, R);
    Tensor out = A;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) out.at(i, j) += R.at(0, j);
    const bool rg = requires_grad(a) || requires_grad(row);
    const ValueId id = push(std::move(out), rg, {});
    if (rg)
        entries_[id].backprop = [a, row, id](Tape& t) {
            const Tensor& g = t.entries_[id].grad;
            if (t.requires_grad(a)) {
                Tensor& ga = t.grad_buf(a);
                for (std::size_t i = 0; i < g.v.size(); ++i) ga.v[i] += g.v[i];
            }
            if (t.requires_grad(row)) {
                Tensor& gr = t.grad_buf(row);
                for (int i = 0; i < g.rows(); ++i)
                    for (int j = 0; j < g.cols(); ++j) gr.at(0, j) += g.at(i, j);
            }
        };
    return id;
}

ValueId Tape::mul(ValueId a, ValueId b) {
    const Tensor& A = val(a);
    const Tensor& B = val(b);
    if (!A.same_shape(B)) shape_error("mul", A, B);
    Tensor out = A;
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] *= B.v[i];
    const bool rg = requires_grad(a) || requires_grad(b);
    const ValueId id = push(std::move(out), rg, {});
    if (rg)
        entries_[id].backprop = [a, b, id](Tape& t) {
            const Tensor& g = t.entries_[id].grad;
            const Tensor& A = t.val(a);
            const Tensor& B = t.val(b);
            if (t.requires_grad(a)) {
                Tensor& ga = t.grad_buf(a);
                for (std::size_t i = 0; i < g.v.size(); ++i) ga.v[i] += g.v[i] * B.v[i];
            }
            if (t.requires_grad(b)) {
                Tensor& gb = t.grad_buf(b);
                for (std::size_t i = 0; i < g.v.size(); ++i) gb.v[i] += g.v[i] * A.v[i];
            }
        };
    return id;
}

ValueId Tape::mul_rowvec(ValueId a, ValueId row) {
    const Tensor& A = val(a);
    const Tensor& R = val(row);
    if (R.rows() != 1 || R.cols() != A.cols()) shape_error("mul_rowvec", A, R);
    Tensor out = A;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) out.at(i, j) *= R.at(0, j);
    const bool rg = requires_grad(a) || requires_grad(row);
    const ValueId id = push(std::move(out), rg, {});
    if (rg)
        entries_[id].backprop = [a, row, id](Tape& t) {
            const Tensor& g = t.entries_[id].grad;
            const Tensor& A = t.val(a);
            const Tensor& R = t.val(row);
            if (t.requires_grad(a)) {
                Tensor& ga = t.grad_buf(a);
                for (int i = 0; i < g.rows(); ++i)
                    for (int j = 0; j < g.cols(); ++j) ga.at(i, j) += g.at(i, j) * R.at(0, j);
            }
            if (t.requires_grad(row)) {
                Tensor& gr = t.grad_buf(row);
                for (int i = 0; i < g.rows(); ++i)
                    for (int j = 0; j < g.cols(); ++j) gr.at(0, j) += g.at(i, j) * A.at(i, j);
            }
        };
    return id;
}

ValueId Tape::div(ValueId a, ValueId b) {
    const Tensor& A = val(a);
    const Tensor& B = val(b);
    if (!A.same_shape(B)) shape_error("div", A, B);
    Tensor out = A;
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] /= B.v[i];
    const bool rg = requires_grad(a) || requires_grad(b);
    const ValueId id = push(std::move(out), rg, {});
    if (rg)
        entries_[id].backprop = [a, b, id](Tape& t) {
            const Tensor& g = t.entries_[id].grad;
            const Tensor& A = t.val(a);
            const Tensor& B = t.val(b);
            if (t.requires_grad(a)) {
                Tensor& ga = t.grad_buf(a);
                for (std::size_t i = 0; i < g.v.size(); ++i) ga.v[i] += g.v[i] / B.v[i];
            }
            if (t.requires_grad(b)) {
                Tensor& gb = t.grad_buf(b);
                for (std::size_t i = 0; i < g.v.size(); ++i)
                    gb.v[i] -= g.v[i] * A.v[i] / (B.v[i] * B.v[i]);
            }
        };
    return id;
}

ValueId Tape::scale(ValueId a, double c) {
    Tensor out = val(a);
    for (auto& x : out.v) x *= c;
    const bool rg = requires_grad(a);
    const ValueId id = push(std::move(out), rg, {});
    if (rg)
        entries_[id].backprop = [a, c, id](Tape& t) {
            const Tensor& g = t.entries_[id].grad;
            Tensor& ga = t.grad_buf(a);
            for (std::size_t i = 0; i < g.v.size(); ++i) ga.v[i] += c * g.v[i];
        };
    return id;
}

ValueId Tape::scale_by(ValueId a, ValueId scalar) {
    const Tensor& A = val(a);
    const Tensor& S = val(scalar);
    if (S.numel() != 1) shape_error("scale_by (scalar operand)", A, S);
    const double s = S.v[0];
    Tensor out = A;
    for (auto& x : out.v) x *= s;
    const bool rg = requires_grad(a) || requires_grad(scalar);
    const ValueId id = push(std::move(out), rg, {});
    if (rg)
        entries_[id].backprop = [a, scalar, id](Tape& t) {
            const Tensor& g = t.entries_[id].grad;
            const Tensor& A = t.val(a);
            const double s = t.val(scalar).v[0];
            if (t.requires_grad(a)) {
                Tensor& ga = t.grad_buf(a);
                for (std::size_t i = 0; i < g.v.size(); ++i) ga.v[i] += s * g.v[i];
            }
            if (t.requires_grad(scalar)) {
                Tensor& gs = t.grad_buf(scalar);
                double acc = 0.0;
                for (std::size_t i = 0; i < g.v.size(); ++i) acc += g.v[i] * A.v[i];
                gs.v[0] += acc;
            }
        };
    return id;
}

ValueId Tape::concat_cols(ValueId a, ValueId b) {
    const Tensor& A = val(a);
    const Tensor& B = val(b);
    if (A.rows() != B.rows()) shape_error("concat_cols", A, B);
    Tensor out(A.rows(), A.cols() + B.cols());
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < A.cols(); ++j) out.at(i, j) = A.at(i, j);
        for (int j = 0; j < B.cols(); ++j) out.at(i, A.cols() + j) = B.at(i, j);
    }
    const bool rg = requires_grad(a) || requires_grad(b);
    const ValueId id = push(std::move(out), rg, {});
    if (rg)
        entries_[id].backprop = [a, b, id](Tape& t) {
            const Tensor& g = t.entries_[id].grad;
            const int ac = t.val(a).cols();
            if (t.requires_grad(a)) {
                Tensor& ga = t.grad_buf(a);
                for (int i = 0; i < ga.rows(); ++i)
                    for (int j = 0; j < ac; ++j) ga.at(i, j) += g.at(i, j);
            }
            if (t.requires_grad(b)) {
                Tensor& gb = t.grad_buf(b);
                for (int i = 0; i < gb.rows(); ++i)
                    for (int j = 0; j < gb.cols(); ++j) gb.at(i, j) += g.at(i, ac + j);
            }
        };
    return id;
}

ValueId Tape::relu(ValueId a) {
    Tensor out = val(a);
    for (auto& x : out.v) x = x > 0.0 ? x : 0.0;
    const bool rg = requires_grad(a);
    const ValueId id = push(std::move(out), rg, {});
    if (rg)
        entries_[id].backprop = [a, id](Tape& t) {
            const Tensor& g = t.entries_[id].grad;
            const Tensor& A = t.val(a);
            Tensor& ga = t.grad_buf(a);
            for (std::size_t i = 0; i < g.v.size(); ++i)
                if (A.v[i] > 0.0) ga.v[i] += g.v[i];
        };
    return id;
}

ValueId Tape::sigmoid(ValueId a) {
    Tensor out = val(a);
    for (auto& x : out.v) x = 1.0 / (1.0 + std::exp(-x));
    const bool rg = requires_grad(a);
    const ValueId id = push(std::move(out), rg, {});
    if (rg)
        entries_[id].backprop = [a, id](Tape& t) {
            const Tensor& g = t.entries_[id].grad;
            const Tensor& Y = t.entries_[id].value;
            Tensor& ga = t.grad_buf(a);
            for (std::size_t i = 0; i < g.v.size(); ++i)
                ga.v[i] += g.v[i] * Y.v[i] * (1.0 - Y.v[i]);
        };
    return id;
}

ValueId Tape::tanh_act(ValueId a) {
    Tensor out = val(a);
    for (auto& x : out.v) x = std::tanh(x);
    const bool rg = requires_grad(a);
    const ValueId id = push(std::move(out), rg, {});
    if (rg)
        entries_[id].backprop = [a, id](Tape& t) {
            const Tensor& g = t.entries_[id].grad;
            const Tensor& Y = t.entries_[id].value;
            Tensor& ga = t.grad_buf(a);
            for (std::size_t i = 0; i < g.v.size(); ++i)
                ga.v[i] += g.v[i] * (1.0 - Y.v[i] * Y.v[i]);
        };
    return id;
}

ValueId Tape::rsqrt_shift(ValueId a, double eps) {
    Tensor out = val(a);
    for (auto& x : out.v) x = 1.0 / std::sqrt(x + eps);
    const bool rg = requires_grad(a);
    const ValueId id = push(std::move(out), rg, {});
    if (rg)
        entries_[id].backprop = [a, id](Tape& t) {
            const Tensor& g = t.entries_[id].grad;
            const Tensor& Y = t.entries_[id].value;
            Tensor& ga = t.grad_buf(a);
            for (std::size_t i = 0; i < g.v.size(); ++i)
                ga.v[i] += g.v[i] * (-0.5) * Y.v[i] * Y.v[i] * Y.v[i];
        };
    return id;
}

ValueId Tape::gather_rows(ValueId a, std::vector<int> idx) {
    const Tensor& A = val(a);
    Tensor out(static_cast<int>(idx.size()), A.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        if (idx[r] < 0 || idx[r] >= A.rows())
            throw std::invalid_argument("gather_rows: index out of range");
        for (int j = 0; j < A.cols(); ++j) out.at(static_cast<int>(r), j) = A.at(idx[r], j);
    }
    const bool rg = requires_grad(a);
    const ValueId id = push(std::move(out), rg, {});
    if (rg)
        entries_[id].backprop = [a, id, idx = std::move(idx)](Tape& t) {
            const Tensor& g = t.entries_[id].grad;
            Tensor& ga = t.grad_buf(a);
            for (std::size_t r = 0; r < idx.size(); ++r)
                for (int j = 0; j < g.cols(); ++j)
                    ga.at(idx[r], j) += g.at(static_cast<int>(r), j);
        };
    return id;
}

ValueId Tape::aggregate_rows(ValueId a, const std::vector<std::vector<int>>& sets, Agg mode) {
    const Tensor& A = val(a);
    Tensor out(static_cast<int>(sets.size()), A.cols());
    for (std::size_t r = 0; r < sets.size(); ++r) {
        for (int s : sets[r]) {
            if (s < 0 || s >= A.rows())
                throw std::invalid_argument("aggregate_rows: index out of range");
            for (int j = 0; j < A.cols(); ++j) out.at(static_cast<int>(r), j) += A.at(s, j);
        }
        if (mode == Agg::Mean && !sets[r].empty()) {
            const double inv = 1.0 / static_cast<double>(sets[r].size());
            for (int j = 0; j < A.cols(); ++j) out.at(static_cast<int>(r), j) *= inv;
        }
    }
    const bool rg = requires_grad(a);
    const ValueId id = push(std::move(out), rg, {});
    if (rg)
        entries_[id].backprop = [a, id, sets, mode](Tape& t) {
            const Tensor& g = t.entries_[id].grad;
            Tensor& ga = t.grad_buf(a);
            for (std::size_t r = 0; r < sets.size(); ++r) {
                if (sets[r].empty()) continue;
                const double w =
                    mode == Agg::Mean ? 1.0 / static_cast<double>(sets[r].size()) : 1.0;
                for (int s : sets[r])
                    for (int j = 0; j < g.cols(); ++j)
                        ga.at(s, j) += w * g.at(static_cast<int>(r), j);
            }
        };
    return id;
}

ValueId Tape::mean_rows(ValueId a) {
    const Tensor& A = val(a);
    Tensor out(1, A.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) out.at(0, j) += A.at(i, j);
    const double inv = A.rows() > 0 ? 1.0 / A.rows() : 0.0;
    for (auto& x : out.v) x *= inv;
    const bool rg = requires_grad(a);
    const ValueId id = push(std::move(out), rg, {});
    if (rg)
        entries_[id].backprop = [a, id](Tape& t) {
            const Tensor& g = t.entries_[id].grad;
            Tensor& ga = t.grad_buf(a);
            const double inv = ga.rows() > 0 ? 1.0 / ga.rows() : 0.0;
            for (int i = 0; i < ga.rows(); ++i)
                for (int j = 0; j < ga.cols(); ++j) ga.at(i, j) += inv * g.at(0, j);
        };
    return id;
}

ValueId Tape::sum_all(ValueId a) {
    const Tensor& A = val(a);
    double total = 0.0;
    for (double x : A.v) total += x;
    const bool rg = requires_grad(a);
    const ValueId id = push(Tensor::scalar(total), rg, {});
    if (rg)
        entries_[id].backprop = [a, id](Tape& t) {
            const double g = t.entries_[id].grad.v[0];
            Tensor& ga = t.grad_buf(a);
            for (auto& x : ga.v) x += g;
        };
    return id;
}

ValueId Tape::mse_loss(ValueId pred, const Tensor& target) {
    const Tensor& P = val(pred);
    if (!P.same_shape(target)) shape_error("mse_loss", P, target);
    double total = 0.0;
    for (std::size_t i = 0; i < P.v.size(); ++i) {
        const double d = P.v[i] - target.v[i];
        total += d * d;
    }
    const double inv = 1.0 / static_cast<double>(P.numel());
    const bool rg = requires_grad(pred);
    const ValueId id = push(Tensor::scalar(total * inv), rg, {});
    if (rg)
        entries_[id].backprop = [pred, id, target, inv](Tape& t) {
            const double g = t.entries_[id].grad.v[0];
            const Tensor& P = t.val(pred);
            Tensor& gp = t.grad_buf(pred);
            for (std::size_t i = 0; i < P.v.size(); ++i)
                gp.v[i] += g * 2.0 * inv * (P.v[i] - target.v[i]);
        };
    return id;
}

ValueId Tape::softmax_cross_entropy(ValueId logits, const std::vector<int>& labels) {
    const Tensor& Z = val(logits);
    if (static_cast<int>(labels.size()) != Z.rows())
        throw std::invalid_argument("softmax_cross_entropy: one label per row required, got " +
                                    std::to_string(labels.size()) + " labels for " +
                                    shape_str(Z));
    Tensor probs(Z.rows(), Z.cols());
    double total = 0.0;
    for (int i = 0; i < Z.rows(); ++i) {
        if (labels[i] < 0 || labels[i] >= Z.cols())
            throw std::invalid_argument("softmax_cross_entropy: label out of range");
        double mx = Z.at(i, 0);
        for (int j = 1; j < Z.cols(); ++j) mx = std::max(mx, Z.at(i, j));
        double denom = 0.0;
        for (int j = 0; j < Z.cols(); ++j) denom += std::exp(Z.at(i, j) - mx);
        for (int j = 0; j < Z.cols(); ++j) probs.at(i, j) = std::exp(Z.at(i, j) - mx) / denom;
        total -= (Z.at(i, labels[i]) - mx) - std::log(denom);
    }
    const double inv = 1.0 / Z.rows();
    const bool rg = requires_grad(logits);
    const ValueId id = push(Tensor::scalar(total * inv), rg, {});
    if (rg)
        entries_[id].backprop = [logits, id, labels, probs = std::move(probs), inv](Tape& t) {
            const double g = t.entries_[id].grad.v[0];
            Tensor& gz = t.grad_buf(logits);
            for (int i = 0; i < gz.rows(); ++i)
                for (int j = 0; j < gz.cols(); ++j) {
                    double d = probs.at(i, j);
                    if (j == labels[i]) d -= 1.0;
                    gz.at(i, j) += g * inv * d;
                }
        };
    return id;
}

void Tape::backward(ValueId loss) {
    if (backward_done_) throw std::logic_error("Tape::backward: tape already consumed");
    const Tensor& L = val(loss);
    if (L.numel() != 1)
        throw std::invalid_argument("Tape::backward: loss must be scalar, got " + shape_str(L));
    backward_done_ = true;
    if (!entries_[loss].requires_grad) return;  // nothing depends on any tracked value
    grad_buf(loss).v[0] = 1.0;
    for (ValueId id = loss; id >= 0; --id) {
        Entry& e = entries_[id];
        if (!e.requires_grad || !e.backprop) continue;
        if (e.grad.numel() == 0) continue;  // no gradient reached this value
        e.backprop(*this);
    }
}

double finite_diff_check(const std::function<ValueId(Tape&, ValueId)>& f, const Tensor& x,
                         double eps) {
    Tensor analytic;
    {
        Tape tape;
        const ValueId xid = tape.leaf(x, true);
        const ValueId loss = f(tape, xid);
        tape.backward(loss);
        analytic = tape.grad(xid);
    }
    const auto eval = [&](const Tensor& probe) {
        Tape tape;
        const ValueId xid = tape.leaf(probe, false);
        return tape.val(f(tape, xid)).v[0];
    };
    double max_rel = 0.0;
    Tensor probe = x;
    for (std::size_t i = 0; i < x.v.size(); ++i) {
        probe.v[i] = x.v[i] + eps;
        const double up = eval(probe);
        probe.v[i] = x.v[i] - eps;
        const double dn = eval(probe);
        probe.v[i] = x.v[i];
        const double numeric = (up - dn) / (2.0 * eps);
        const double a = analytic.v[i];
        const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
        max_rel = std::max(max_rel, rel);
    }
    return max_rel;
}

}  // namespace ranwire
