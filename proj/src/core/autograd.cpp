#include "tryon/core/autograd.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "tryon/core/errors.hpp"

namespace tryon::core {

Var Var::leaf(Tensor value, bool requires_grad) {
    auto n = std::make_shared<Node>();
    n->value = std::move(value);
    n->requires_grad = requires_grad;
    return Var(n);
}

static Var make_op(Tensor value, std::vector<Var> parents, std::function<void(Node&)> bw) {
    auto n = std::make_shared<Node>();
    n->value = std::move(value);
    for (const auto& p : parents) {
        n->parents.push_back(p.node());
        if (p.requires_grad()) n->requires_grad = true;
    }
    if (n->requires_grad) n->backward = std::move(bw);
    return Var(n);
}

void backward(const Var& root) {
    if (!root.defined() || root.value().numel() != 1)
        throw ArgumentError("backward: root must be a defined scalar");
    // Reverse topological order via iterative post-order DFS.
    std::vector<Node*> order;
    std::unordered_set<Node*> visited;
    struct Frame { Node* n; size_t next; };
    std::vector<Frame> stack;
    stack.push_back({root.node().get(), 0});
    visited.insert(root.node().get());
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next < f.n->parents.size()) {
            Node* p = f.n->parents[f.next++].get();
            if (p->requires_grad && !visited.count(p)) {
                visited.insert(p);
                stack.push_back({p, 0});
            }
        } else {
            order.push_back(f.n);
            stack.pop_back();
        }
    }
    root.node()->ensure_grad()[0] = 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        Node* n = *it;
        if (n->backward && n->grad.defined()) n->backward(*n);
    }
}

static void check_same(const Var& a, const Var& b, const char* op) {
    if (!a.value().same_shape(b.value()))
        throw DimensionError(std::string(op) + ": shape mismatch " + shape_str(a.value().shape()) +
                             " vs " + shape_str(b.value().shape()));
}

// ---------------------------------------------------------------- elementwise

Var add(const Var& a, const Var& b) {
    check_same(a, b, "add");
    Tensor out = core::add(a.value(), b.value());
    return make_op(std::move(out), {a, b}, [](Node& n) {
        for (int p = 0; p < 2; ++p) {
            Node* par = n.parents[p].get();
            if (!par->requires_grad) continue;
            Tensor& g = par->ensure_grad();
            for (int i = 0; i < g.numel(); ++i) g[i] += n.grad[i];
        }
    });
}

Var sub(const Var& a, const Var& b) {
    check_same(a, b, "sub");
    Tensor out = core::sub(a.value(), b.value());
    return make_op(std::move(out), {a, b}, [](Node& n) {
        if (n.parents[0]->requires_grad) {
            Tensor& g = n.parents[0]->ensure_grad();
            for (int i = 0; i < g.numel(); ++i) g[i] += n.grad[i];
        }
        if (n.parents[1]->requires_grad) {
            Tensor& g = n.parents[1]->ensure_grad();
            for (int i = 0; i < g.numel(); ++i) g[i] -= n.grad[i];
        }
    });
}

Var mul(const Var& a, const Var& b) {
    check_same(a, b, "mul");
    Tensor out = core::mul(a.value(), b.value());
    return make_op(std::move(out), {a, b}, [](Node& n) {
        const Tensor& av = n.parents[0]->value;
        const Tensor& bv = n.parents[1]->value;
        if (n.parents[0]->requires_grad) {
            Tensor& g = n.parents[0]->ensure_grad();
            for (int i = 0; i < g.numel(); ++i) g[i] += n.grad[i] * bv[i];
        }
        if (n.parents[1]->requires_grad) {
            Tensor& g = n.parents[1]->ensure_grad();
            for (int i = 0; i < g.numel(); ++i) g[i] += n.grad[i] * av[i];
        }
    });
}

Var add_scalar(const Var& a, double s) {
    Tensor out(a.value().shape());
    for (int i = 0; i < out.numel(); ++i) out[i] = a.value()[i] + s;
    return make_op(std::move(out), {a}, [](Node& n) {
        Tensor& g = n.parents[0]->ensure_grad();
        for (int i = 0; i < g.numel(); ++i) g[i] += n.grad[i];
    });
}

Var mul_scalar(const Var& a, double s) {
    Tensor out = core::scale(a.value(), s);
    return make_op(std::move(out), {a}, [s](Node& n) {
        Tensor& g = n.parents[0]->ensure_grad();
        for (int i = 0; i < g.numel(); ++i) g[i] += n.grad[i] * s;
    });
}

Var mul_scalar_var(const Var& s, const Var& x) {
    if (s.value().numel() != 1) throw DimensionError("mul_scalar_var: scale must have numel 1");
    double sv = s.value()[0];
    Tensor out = core::scale(x.value(), sv);
    return make_op(std::move(out), {s, x}, [](Node& n) {
        double sval = n.parents[0]->value[0];
        const Tensor& xv = n.parents[1]->value;
        if (n.parents[0]->requires_grad) {
            double acc = 0.0;
            for (int i = 0; i < xv.numel(); ++i) acc += n.grad[i] * xv[i];
            n.parents[0]->ensure_grad()[0] += acc;
        }
        if (n.parents[1]->requires_grad) {
            Tensor& g = n.parents[1]->ensure_grad();
            for (int i = 0; i < g.numel(); ++i) g[i] += n.grad[i] * sval;
        }
    });
}

template <typename F, typename DF>
static Var unary_op(const Var& a, F f, DF df) {
    Tensor out(a.value().shape());
    for (int i = 0; i < out.numel(); ++i) out[i] = f(a.value()[i]);
    return make_op(std::move(out), {a}, [df](Node& n) {
        const Tensor& xv = n.parents[0]->value;
        Tensor& g = n.parents[0]->ensure_grad();
        for (int i = 0; i < g.numel(); ++i) g[i] += n.grad[i] * df(xv[i]);
    });
}

Var relu(const Var& a) {
    return unary_op(
        a, [](double x) { return x > 0 ? x : 0.0; }, [](double x) { return x > 0 ? 1.0 : 0.0; });
}

Var leaky_relu(const Var& a, double slope) {
    return unary_op(
        a, [slope](double x) { return x > 0 ? x : slope * x; },
        [slope](double x) { return x > 0 ? 1.0 : slope; });
}

Var silu(const Var& a) {
    auto sig = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
    return unary_op(
        a, [sig](double x) { return x * sig(x); },
        [sig](double x) {
            double s = sig(x);
            return s * (1.0 + x * (1.0 - s));
        });
}

Var gelu(const Var& a) {
    constexpr double kSqrt2OverPi = 0.7978845608028654;
    constexpr double kCoef = 0.044715;
    return unary_op(
        a,
        [=](double x) {
            double u = kSqrt2OverPi * (x + kCoef * x * x * x);
            return 0.5 * x * (1.0 + std::tanh(u));
        },
        [=](double x) {
            double u = kSqrt2OverPi * (x + kCoef * x * x * x);
            double t = std::tanh(u);
            double du = kSqrt2OverPi * (1.0 + 3.0 * kCoef * x * x);
            return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * du;
        });
}

Var tanh_op(const Var& a) {
    return unary_op(
        a, [](double x) { return std::tanh(x); },
        [](double x) {
            double t = std::tanh(x);
            return 1.0 - t * t;
        });
}

// ---------------------------------------------------------------- reductions

Var sum(const Var& a) {
    Tensor out = Tensor::scalar(a.value().sum_value());
    return make_op(std::move(out), {a}, [](Node& n) {
        Tensor& g = n.parents[0]->ensure_grad();
        double gv = n.grad[0];
        for (int i = 0; i < g.numel(); ++i) g[i] += gv;
    });
}

Var mean(const Var& a) {
    int count = a.value().numel();
    Tensor out = Tensor::scalar(a.value().mean_value());
    return make_op(std::move(out), {a}, [count](Node& n) {
        Tensor& g = n.parents[0]->ensure_grad();
        double gv = n.grad[0] / static_cast<double>(count);
        for (int i = 0; i < g.numel(); ++i) g[i] += gv;
    });
}

Var mse_loss(const Var& a, const Var& b) {
    check_same(a, b, "mse_loss");
    int count = a.value().numel();
    double acc = 0.0;
    for (int i = 0; i < count; ++i) {
        double d = a.value()[i] - b.value()[i];
        acc += d * d;
    }
    Tensor out = Tensor::scalar(acc / count);
    return make_op(std::move(out), {a, b}, [count](Node& n) {
        const Tensor& av = n.parents[0]->value;
        const Tensor& bv = n.parents[1]->value;
        double gv = 2.0 * n.grad[0] / static_cast<double>(count);
        if (n.parents[0]->requires_grad) {
            Tensor& g = n.parents[0]->ensure_grad();
            for (int i = 0; i < count; ++i) g[i] += gv * (av[i] - bv[i]);
        }
        if (n.parents[1]->requires_grad) {
            Tensor& g = n.parents[1]->ensure_grad();
            for (int i = 0; i < count; ++i) g[i] -= gv * (av[i] - bv[i]);
        }
    });
}

Var l1_loss(const Var& a, const Var& b) {
    check_same(a, b, "l1_loss");
    int count = a.value().numel();
    double acc = 0.0;
    for (int i = 0; i < count; ++i) acc += std::fabs(a.value()[i] - b.value()[i]);
    Tensor out = Tensor::scalar(acc / count);
    return make_op(std::move(out), {a, b}, [count](Node& n) {
        const Tensor& av = n.parents[0]->value;
        const Tensor& bv = n.parents[1]->value;
        double gv = n.grad[0] / static_cast<double>(count);
        for (int i = 0; i < count; ++i) {
            double d = av[i] - bv[i];
            double s = d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0);
            if (n.parents[0]->requires_grad) n.parents[0]->ensure_grad()[i] += gv * s;
            if (n.parents[1]->requires_grad) n.parents[1]->ensure_grad()[i] -= gv * s;
        }
    });
}

// ---------------------------------------------------------------- 2-D algebra

static void check_2d(const Var& a, const char* op) {
    if (a.value().ndim() != 2) throw DimensionError(std::string(op) + ": expected 2-D tensor");
}

Var matmul(const Var& a, const Var& b) {
    check_2d(a, "matmul");
    check_2d(b, "matmul");
    int m = a.value().dim(0), k = a.value().dim(1);
    int k2 = b.value().dim(0), n = b.value().dim(1);
    if (k != k2) throw DimensionError("matmul: inner dims differ");
    Tensor out(Shape{m, n});
    for (int i = 0; i < m; ++i)
        for (int p = 0; p < k; ++p) {
            double av = a.value().at(i, p);
            if (av == 0.0) continue;
            for (int j = 0; j < n; ++j) out.at(i, j) += av * b.value().at(p, j);
        }
    return make_op(std::move(out), {a, b}, [m, k, n](Node& node) {
        const Tensor& av = node.parents[0]->value;
        const Tensor& bv = node.parents[1]->value;
        if (node.parents[0]->requires_grad) {
            Tensor& ga = node.parents[0]->ensure_grad();
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j) {
                    double gv = node.grad.at(i, j);
                    if (gv == 0.0) continue;
                    for (int p = 0; p < k; ++p) ga.at(i, p) += gv * bv.at(p, j);
                }
        }
        if (node.parents[1]->requires_grad) {
            Tensor& gb = node.parents[1]->ensure_grad();
            for (int i = 0; i < m; ++i)
                for (int p = 0; p < k; ++p) {
                    double av2 = av.at(i, p);
                    if (av2 == 0.0) continue;
                    for (int j = 0; j < n; ++j) gb.at(p, j) += av2 * node.grad.at(i, j);
                }
        }
    });
}

Var transpose(const Var& a) {
    check_2d(a, "transpose");
    int m = a.value().dim(0), n = a.value().dim(1);
    Tensor out(Shape{n, m});
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) out.at(j, i) = a.value().at(i, j);
    return make_op(std::move(out), {a}, [m, n](Node& node) {
        Tensor& g = node.parents[0]->ensure_grad();
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) g.at(i, j) += node.grad.at(j, i);
    });
}

Var linear(const Var& x, const Var& w, const Var& b) {
    check_2d(x, "linear");
    check_2d(w, "linear");
    int n = x.value().dim(0), di = x.value().dim(1);
    int di2 = w.value().dim(0), dout = w.value().dim(1);
    if (di != di2) throw DimensionError("linear: input width does not match weight");
    if (b.value().numel() != dout) throw DimensionError("linear: bias size mismatch");
    Tensor out(Shape{n, dout});
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < dout; ++j) out.at(i, j) = b.value()[j];
        for (int p = 0; p < di; ++p) {
            double xv = x.value().at(i, p);
            if (xv == 0.0) continue;
            for (int j = 0; j < dout; ++j) out.at(i, j) += xv * w.value().at(p, j);
        }
    }
    return make_op(std::move(out), {x, w, b}, [n, di, dout](Node& node) {
        const Tensor& xv = node.parents[0]->value;
        const Tensor& wv = node.parents[1]->value;
        if (node.parents[0]->requires_grad) {
            Tensor& gx = node.parents[0]->ensure_grad();
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < dout; ++j) {
                    double gv = node.grad.at(i, j);
                    if (gv == 0.0) continue;
                    for (int p = 0; p < di; ++p) gx.at(i, p) += gv * wv.at(p, j);
                }
        }
        if (node.parents[1]->requires_grad) {
            Tensor& gw = node.parents[1]->ensure_grad();
            for (int i = 0; i < n; ++i)
                for (int p = 0; p < di; ++p) {
                    double xval = xv.at(i, p);
                    if (xval == 0.0) continue;
                    for (int j = 0; j < dout; ++j) gw.at(p, j) += xval * node.grad.at(i, j);
                }
        }
        if (node.parents[2]->requires_grad) {
            Tensor& gb = node.parents[2]->ensure_grad();
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < dout; ++j) gb[j] += node.grad.at(i, j);
        }
    });
}

Var softmax_rows(const Var& x, const std::vector<char>* key_mask) {
    check_2d(x, "softmax_rows");
    int n = x.value().dim(0), d = x.value().dim(1);
    std::vector<char> mask;
    if (key_mask) {
        if (static_cast<int>(key_mask->size()) != d)
            throw DimensionError("softmax_rows: mask length mismatch");
        mask = *key_mask;
    } else {
        mask.assign(static_cast<size_t>(d), 1);
    }
    Tensor out(Shape{n, d});
    for (int i = 0; i < n; ++i) {
        double mx = -1e300;
        for (int j = 0; j < d; ++j)
            if (mask[j]) mx = std::max(mx, x.value().at(i, j));
        double z = 0.0;
        for (int j = 0; j < d; ++j) {
            if (!mask[j]) continue;
            double e = std::exp(x.value().at(i, j) - mx);
            out.at(i, j) = e;
            z += e;
        }
        if (z > 0)
            for (int j = 0; j < d; ++j) out.at(i, j) /= z;
    }
    return make_op(std::move(out), {x}, [n, d, mask](Node& node) {
        Tensor& g = node.parents[0]->ensure_grad();
        for (int i = 0; i < n; ++i) {
            double dot = 0.0;
            for (int j = 0; j < d; ++j) dot += node.grad.at(i, j) * node.value.at(i, j);
            for (int j = 0; j < d; ++j) {
                if (!mask[j]) continue;
                g.at(i, j) += node.value.at(i, j) * (node.grad.at(i, j) - dot);
            }
        }
    });
}

Var layer_norm_rows(const Var& x, const Var& gamma, const Var& beta, double eps) {
    check_2d(x, "layer_norm_rows");
    int n = x.value().dim(0), d = x.value().dim(1);
    if (gamma.value().numel() != d || beta.value().numel() != d)
        throw DimensionError("layer_norm_rows: gamma/beta size mismatch");
    Tensor out(Shape{n, d});
    Tensor xhat(Shape{n, d});
    Tensor inv_std(Shape{n});
    for (int i = 0; i < n; ++i) {
        double mu = 0.0;
        for (int j = 0; j < d; ++j) mu += x.value().at(i, j);
        mu /= d;
        double var = 0.0;
        for (int j = 0; j < d; ++j) {
            double c = x.value().at(i, j) - mu;
            var += c * c;
        }
        var /= d;
        double is = 1.0 / std::sqrt(var + eps);
        inv_std[i] = is;
        for (int j = 0; j < d; ++j) {
            double xh = (x.value().at(i, j) - mu) * is;
            xhat.at(i, j) = xh;
            out.at(i, j) = gamma.value()[j] * xh + beta.value()[j];
        }
    }
    return make_op(std::move(out), {x, gamma, beta},
                   [n, d, xhat = std::move(xhat), inv_std = std::move(inv_std)](Node& node) {
                       const Tensor& gv = node.parents[1]->value;
                       if (node.parents[1]->requires_grad) {
                           Tensor& gg = node.parents[1]->ensure_grad();
                           for (int i = 0; i < n; ++i)
                               for (int j = 0; j < d; ++j)
                                   gg[j] += node.grad.at(i, j) * xhat.at(i, j);
                       }
                       if (node.parents[2]->requires_grad) {
                           Tensor& gb = node.parents[2]->ensure_grad();
                           for (int i = 0; i < n; ++i)
                               for (int j = 0; j < d; ++j) gb[j] += node.grad.at(i, j);
                       }
                       if (node.parents[0]->requires_grad) {
                           Tensor& gx = node.parents[0]->ensure_grad();
                           for (int i = 0; i < n; ++i) {
                               double sum_dy = 0.0, sum_dy_xhat = 0.0;
                               for (int j = 0; j < d; ++j) {
                                   double dy = node.grad.at(i, j) * gv[j];
                                   sum_dy += dy;
                                   sum_dy_xhat += dy * xhat.at(i, j);
                               }
                               for (int j = 0; j < d; ++j) {
                                   double dy = node.grad.at(i, j) * gv[j];
                                   gx.at(i, j) += inv_std[i] *
                                                  (dy - sum_dy / d - xhat.at(i, j) * sum_dy_xhat / d);
                               }
                           }
                       }
                   });
}

Var embedding_rows(const Var& table, const std::vector<int>& ids) {
    check_2d(table, "embedding_rows");
    int v = table.value().dim(0), d = table.value().dim(1);
    for (int id : ids)
        if (id < 0 || id >= v) throw ArgumentError("embedding_rows: id out of range");
    int n = static_cast<int>(ids.size());
    Tensor out(Shape{n, d});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) out.at(i, j) = table.value().at(ids[static_cast<size_t>(i)], j);
    return make_op(std::move(out), {table}, [ids, d](Node& node) {
        Tensor& g = node.parents[0]->ensure_grad();
        for (size_t i = 0; i < ids.size(); ++i)
            for (int j = 0; j < d; ++j) g.at(ids[i], j) += node.grad.at(static_cast<int>(i), j);
    });
}

Var concat_rows(const std::vector<Var>& parts) {
    if (parts.empty()) throw ArgumentError("concat_rows: empty input");
    int d = parts[0].value().dim(1);
    int total = 0;
    for (const auto& p : parts) {
        check_2d(p, "concat_rows");
        if (p.value().dim(1) != d) throw DimensionError("concat_rows: column mismatch");
        total += p.value().dim(0);
    }
    Tensor out(Shape{total, d});
    int r = 0;
    for (const auto& p : parts) {
        for (int i = 0; i < p.value().dim(0); ++i)
            for (int j = 0; j < d; ++j) out.at(r + i, j) = p.value().at(i, j);
        r += p.value().dim(0);
    }
    return make_op(std::move(out), parts, [d](Node& node) {
        int r0 = 0;
        for (auto& par : node.parents) {
            int rows = par->value.dim(0);
            if (par->requires_grad) {
                Tensor& g = par->ensure_grad();
                for (int i = 0; i < rows; ++i)
                    for (int j = 0; j < d; ++j) g.at(i, j) += node.grad.at(r0 + i, j);
            }
            r0 += rows;
        }
    });
}

Var slice_rows(const Var& x, int r0, int r1) {
    check_2d(x, "slice_rows");
    int n = x.value().dim(0), d = x.value().dim(1);
    if (r0 < 0 || r1 > n || r0 >= r1) throw ArgumentError("slice_rows: bad range");
    Tensor out(Shape{r1 - r0, d});
    for (int i = r0; i < r1; ++i)
        for (int j = 0; j < d; ++j) out.at(i - r0, j) = x.value().at(i, j);
    return make_op(std::move(out), {x}, [r0, r1, d](Node& node) {
        Tensor& g = node.parents[0]->ensure_grad();
        for (int i = r0; i < r1; ++i)
            for (int j = 0; j < d; ++j) g.at(i, j) += node.grad.at(i - r0, j);
    });
}

Var add_row_broadcast(const Var& x, const Var& row) {
    check_2d(x, "add_row_broadcast");
    int n = x.value().dim(0), d = x.value().dim(1);
    if (row.value().numel() != d) throw DimensionError("add_row_broadcast: row size mismatch");
    Tensor out(Shape{n, d});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) out.at(i, j) = x.value().at(i, j) + row.value()[j];
    return make_op(std::move(out), {x, row}, [n, d](Node& node) {
        if (node.parents[0]->requires_grad) {
            Tensor& g = node.parents[0]->ensure_grad();
            for (int i = 0; i < g.numel(); ++i) g[i] += node.grad[i];
        }
        if (node.parents[1]->requires_grad) {
            Tensor& g = node.parents[1]->ensure_grad();
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < d; ++j) g[j] += node.grad.at(i, j);
        }
    });
}

// ------------------------------------------------------------- conv/sampling

static void check_3d(const Var& a, const char* op) {
    if (a.value().ndim() != 3) throw DimensionError(std::string(op) + ": expected (c,h,w) tensor");
}

Tensor conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, int stride) {
    if (x.ndim() != 3 || w.ndim() != 4) throw DimensionError("conv2d: bad input rank");
    int cin = x.dim(0), h = x.dim(1), wd = x.dim(2);
    int cout = w.dim(0), k = w.dim(2);
    if (w.dim(1) != cin)
        throw DimensionError("conv2d: weight expects " + std::to_string(w.dim(1)) +
                             " input channels, got " + std::to_string(cin));
    if (w.dim(3) != k || k % 2 == 0) throw DimensionError("conv2d: kernel must be square and odd");
    if (b.numel() != cout) throw DimensionError("conv2d: bias size mismatch");
    if (stride < 1) throw ArgumentError("conv2d: stride must be >= 1");
    int pad = (k - 1) / 2;
    int oh = (h - 1) / stride + 1;
    int ow = (wd - 1) / stride + 1;
    Tensor out(Shape{cout, oh, ow});
    for (int co = 0; co < cout; ++co)
        for (int oy = 0; oy < oh; ++oy)
            for (int ox = 0; ox < ow; ++ox) {
                double acc = b[co];
                int base_y = oy * stride - pad;
                int base_x = ox * stride - pad;
                for (int ci = 0; ci < cin; ++ci)
                    for (int ky = 0; ky < k; ++ky) {
                        int iy = base_y + ky;
                        if (iy < 0 || iy >= h) continue;
                        for (int kx = 0; kx < k; ++kx) {
                            int ix = base_x + kx;
                            if (ix < 0 || ix >= wd) continue;
                            acc += w.at(co, ci, ky, kx) * x.at(ci, iy, ix);
                        }
                    }
                out.at(co, oy, ox) = acc;
            }
    return out;
}

Var conv2d(const Var& x, const Var& w, const Var& b, int stride) {
    Tensor out = conv2d_forward(x.value(), w.value(), b.value(), stride);
    int cin = x.value().dim(0), h = x.value().dim(1), wd = x.value().dim(2);
    int cout = w.value().dim(0), k = w.value().dim(2);
    int pad = (k - 1) / 2;
    return make_op(std::move(out), {x, w, b}, [cin, h, wd, cout, k, pad, stride](Node& node) {
        const Tensor& xv = node.parents[0]->value;
        const Tensor& wv = node.parents[1]->value;
        bool need_x = node.parents[0]->requires_grad;
        bool need_w = node.parents[1]->requires_grad;
        bool need_b = node.parents[2]->requires_grad;
        Tensor* gx = need_x ? &node.parents[0]->ensure_grad() : nullptr;
        Tensor* gw = need_w ? &node.parents[1]->ensure_grad() : nullptr;
        Tensor* gb = need_b ? &node.parents[2]->ensure_grad() : nullptr;
        int oh = node.value.dim(1), ow = node.value.dim(2);
        for (int co = 0; co < cout; ++co)
            for (int oy = 0; oy < oh; ++oy)
                for (int ox = 0; ox < ow; ++ox) {
                    double g = node.grad.at(co, oy, ox);
                    if (g == 0.0) continue;
                    if (gb) (*gb)[co] += g;
                    int base_y = oy * stride - pad;
                    int base_x = ox * stride - pad;
                    for (int ci = 0; ci < cin; ++ci)
                        for (int ky = 0; ky < k; ++ky) {
                            int iy = base_y + ky;
                            if (iy < 0 || iy >= h) continue;
                            for (int kx = 0; kx < k; ++kx) {
                                int ix = base_x + kx;
                                if (ix < 0 || ix >= wd) continue;
                                if (gw) gw->at(co, ci, ky, kx) += g * xv.at(ci, iy, ix);
                                if (gx) gx->at(ci, iy, ix) += g * wv.at(co, ci, ky, kx);
                            }
                        }
                }
    });
}

double bilinear_sample_zero(const Tensor& img, int channel, double fy, double fx) {
    int h = img.dim(1), w = img.dim(2);
    int y0 = static_cast<int>(std::floor(fy));
    int x0 = static_cast<int>(std::floor(fx));
    double dy = fy - y0, dx = fx - x0;
    auto v = [&](int yy, int xx) -> double {
        if (yy < 0 || yy >= h || xx < 0 || xx >= w) return 0.0;
        return img.at(channel, yy, xx);
    };
    return (1 - dy) * (1 - dx) * v(y0, x0) + (1 - dy) * dx * v(y0, x0 + 1) +
           dy * (1 - dx) * v(y0 + 1, x0) + dy * dx * v(y0 + 1, x0 + 1);
}

// Value plus derivatives w.r.t. the sampling coordinates; scatters input grads.
struct BilinearTap {
    double value, d_dfy, d_dfx;
};

static BilinearTap bilinear_tap(const Tensor& img, int channel, double fy, double fx) {
    int h = img.dim(1), w = img.dim(2);
    int y0 = static_cast<int>(std::floor(fy));
    int x0 = static_cast<int>(std::floor(fx));
    double dy = fy - y0, dx = fx - x0;
    auto v = [&](int yy, int xx) -> double {
        if (yy < 0 || yy >= h || xx < 0 || xx >= w) return 0.0;
        return img.at(channel, yy, xx);
    };
    double v00 = v(y0, x0), v01 = v(y0, x0 + 1), v10 = v(y0 + 1, x0), v11 = v(y0 + 1, x0 + 1);
    BilinearTap t;
    t.value = (1 - dy) * (1 - dx) * v00 + (1 - dy) * dx * v01 + dy * (1 - dx) * v10 + dy * dx * v11;
    t.d_dfx = (1 - dy) * (v01 - v00) + dy * (v11 - v10);
    t.d_dfy = (1 - dx) * (v10 - v00) + dx * (v11 - v01);
    return t;
}

static void bilinear_scatter(Tensor& gimg, int channel, double fy, double fx, double g) {
    int h = gimg.dim(1), w = gimg.dim(2);
    int y0 = static_cast<int>(std::floor(fy));
    int x0 = static_cast<int>(std::floor(fx));
    double dy = fy - y0, dx = fx - x0;
    auto acc = [&](int yy, int xx, double wgt) {
        if (yy < 0 || yy >= h || xx < 0 || xx >= w) return;
        gimg.at(channel, yy, xx) += g * wgt;
    };
    acc(y0, x0, (1 - dy) * (1 - dx));
    acc(y0, x0 + 1, (1 - dy) * dx);
    acc(y0 + 1, x0, dy * (1 - dx));
    acc(y0 + 1, x0 + 1, dy * dx);
}

Var deform_conv2d(const Var& x, const Var& w, const Var& b, const Var& offsets) {
    check_3d(x, "deform_conv2d");
    if (w.value().ndim() != 4) throw DimensionError("deform_conv2d: weight must be 4-D");
    int cin = x.value().dim(0), h = x.value().dim(1), wd = x.value().dim(2);
    int cout = w.value().dim(0), k = w.value().dim(2);
    if (w.value().dim(1) != cin) throw DimensionError("deform_conv2d: channel mismatch");
    if (w.value().dim(3) != k || k % 2 == 0)
        throw DimensionError("deform_conv2d: kernel must be square and odd");
    if (b.value().numel() != cout) throw DimensionError("deform_conv2d: bias size mismatch");
    if (offsets.value().ndim() != 3 || offsets.value().dim(0) != 2 * k * k ||
        offsets.value().dim(1) != h || offsets.value().dim(2) != wd)
        throw DimensionError("deform_conv2d: offsets must be (2k^2,h,w) matching the input");
    int pad = (k - 1) / 2;
    int taps = k * k;
    Tensor out(Shape{cout, h, wd});
    const Tensor& xv = x.value();
    const Tensor& wv = w.value();
    const Tensor& ov = offsets.value();
    for (int y = 0; y < h; ++y)
        for (int xcol = 0; xcol < wd; ++xcol) {
            for (int co = 0; co < cout; ++co) out.at(co, y, xcol) = b.value()[co];
            for (int n = 0; n < taps; ++n) {
                int ky = n / k, kx = n % k;
                double fy = y + ky - pad + ov.at(2 * n + 1, y, xcol);
                double fx = xcol + kx - pad + ov.at(2 * n, y, xcol);
                for (int ci = 0; ci < cin; ++ci) {
                    double s = bilinear_sample_zero(xv, ci, fy, fx);
                    if (s == 0.0) continue;
                    for (int co = 0; co < cout; ++co)
                        out.at(co, y, xcol) += wv.at(co, ci, ky, kx) * s;
                }
            }
        }
    return make_op(std::move(out), {x, w, b, offsets}, [cin, h, wd, cout, k, pad, taps](Node& node) {
        const Tensor& xv = node.parents[0]->value;
        const Tensor& wv = node.parents[1]->value;
        const Tensor& ov = node.parents[3]->value;
        bool need_x = node.parents[0]->requires_grad;
        bool need_w = node.parents[1]->requires_grad;
        bool need_b = node.parents[2]->requires_grad;
        bool need_o = node.parents[3]->requires_grad;
        Tensor* gx = need_x ? &node.parents[0]->ensure_grad() : nullptr;
        Tensor* gw = need_w ? &node.parents[1]->ensure_grad() : nullptr;
        Tensor* gb = need_b ? &node.parents[2]->ensure_grad() : nullptr;
        Tensor* go = need_o ? &node.parents[3]->ensure_grad() : nullptr;
        for (int y = 0; y < h; ++y)
            for (int xcol = 0; xcol < wd; ++xcol) {
                if (gb)
                    for (int co = 0; co < cout; ++co) (*gb)[co] += node.grad.at(co, y, xcol);
                for (int n = 0; n < taps; ++n) {
                    int ky = n / k, kx = n % k;
                    double fy = y + ky - pad + ov.at(2 * n + 1, y, xcol);
                    double fx = xcol + kx - pad + ov.at(2 * n, y, xcol);
                    double gofy = 0.0, gofx = 0.0;
                    for (int ci = 0; ci < cin; ++ci) {
                        BilinearTap t = bilinear_tap(xv, ci, fy, fx);
                        double gs = 0.0;  // dL/d(sample value)
                        for (int co = 0; co < cout; ++co) {
                            double g = node.grad.at(co, y, xcol);
                            if (g == 0.0) continue;
                            if (gw) gw->at(co, ci, ky, kx) += g * t.value;
                            gs += g * wv.at(co, ci, ky, kx);
                        }
                        if (gs != 0.0) {
                            if (gx) bilinear_scatter(*gx, ci, fy, fx, gs);
                            gofy += gs * t.d_dfy;
                            gofx += gs * t.d_dfx;
                        }
                    }
                    if (go) {
                        go->at(2 * n, y, xcol) += gofx;
                        go->at(2 * n + 1, y, xcol) += gofy;
                    }
                }
            }
    });
}

Var grid_warp(const Var& img, const Var& flow) {
    check_3d(img, "grid_warp");
    check_3d(flow, "grid_warp");
    int c = img.value().dim(0), h = img.value().dim(1), w = img.value().dim(2);
    if (flow.value().dim(0) != 2 || flow.value().dim(1) != h || flow.value().dim(2) != w)
        throw DimensionError("grid_warp: flow must be (2,h,w) matching the image");
    Tensor out(Shape{c, h, w});
    const Tensor& iv = img.value();
    const Tensor& fv = flow.value();
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double fy = y + fv.at(1, y, x);
            double fx = x + fv.at(0, y, x);
            for (int ci = 0; ci < c; ++ci) out.at(ci, y, x) = bilinear_sample_zero(iv, ci, fy, fx);
        }
    return make_op(std::move(out), {img, flow}, [c, h, w](Node& node) {
        const Tensor& iv = node.parents[0]->value;
        const Tensor& fv = node.parents[1]->value;
        bool need_img = node.parents[0]->requires_grad;
        bool need_flow = node.parents[1]->requires_grad;
        Tensor* gi = need_img ? &node.parents[0]->ensure_grad() : nullptr;
        Tensor* gf = need_flow ? &node.parents[1]->ensure_grad() : nullptr;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                double fy = y + fv.at(1, y, x);
                double fx = x + fv.at(0, y, x);
                double gofx = 0.0, gofy = 0.0;
                for (int ci = 0; ci < c; ++ci) {
                    double g = node.grad.at(ci, y, x);
                    if (g == 0.0) continue;
                    if (gi) bilinear_scatter(*gi, ci, fy, fx, g);
                    if (gf) {
                        BilinearTap t = bilinear_tap(iv, ci, fy, fx);
                        gofx += g * t.d_dfx;
                        gofy += g * t.d_dfy;
                    }
                }
                if (gf) {
                    gf->at(0, y, x) += gofx;
                    gf->at(1, y, x) += gofy;
                }
            }
    });
}

Tensor grid_warp_nearest(const Tensor& img, const Tensor& flow) {
    if (img.ndim() != 3 || flow.ndim() != 3 || flow.dim(0) != 2 || flow.dim(1) != img.dim(1) ||
        flow.dim(2) != img.dim(2))
        throw DimensionError("grid_warp_nearest: flow must be (2,h,w) matching the image");
    int c = img.dim(0), h = img.dim(1), w = img.dim(2);
    Tensor out(Shape{c, h, w});
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            int sy = static_cast<int>(std::lround(y + flow.at(1, y, x)));
            int sx = static_cast<int>(std::lround(x + flow.at(0, y, x)));
            bool in = sy >= 0 && sy < h && sx >= 0 && sx < w;
            for (int ci = 0; ci < c; ++ci) out.at(ci, y, x) = in ? img.at(ci, sy, sx) : 0.0;
        }
    return out;
}

Tensor upsample_bilinear_forward(const Tensor& x, int out_h, int out_w) {
    if (x.ndim() != 3) throw DimensionError("upsample_bilinear: expected (c,h,w)");
    int c = x.dim(0), h = x.dim(1), w = x.dim(2);
    if (out_h < 1 || out_w < 1) throw ArgumentError("upsample_bilinear: bad output size");
    Tensor out(Shape{c, out_h, out_w});
    double sy = out_h > 1 ? static_cast<double>(h - 1) / (out_h - 1) : 0.0;
    double sx = out_w > 1 ? static_cast<double>(w - 1) / (out_w - 1) : 0.0;
    for (int oy = 0; oy < out_h; ++oy)
        for (int ox = 0; ox < out_w; ++ox) {
            double fy = oy * sy, fx = ox * sx;
            int y0 = std::min(static_cast<int>(std::floor(fy)), h - 1);
            int x0 = std::min(static_cast<int>(std::floor(fx)), w - 1);
            int y1 = std::min(y0 + 1, h - 1), x1 = std::min(x0 + 1, w - 1);
            double dy = fy - y0, dx = fx - x0;
            for (int ci = 0; ci < c; ++ci) {
                out.at(ci, oy, ox) = (1 - dy) * (1 - dx) * x.at(ci, y0, x0) +
                                     (1 - dy) * dx * x.at(ci, y0, x1) +
                                     dy * (1 - dx) * x.at(ci, y1, x0) + dy * dx * x.at(ci, y1, x1);
            }
        }
    return out;
}

Var upsample_bilinear(const Var& x, int out_h, int out_w) {
    Tensor out = upsample_bilinear_forward(x.value(), out_h, out_w);
    int c = x.value().dim(0), h = x.value().dim(1), w = x.value().dim(2);
    return make_op(std::move(out), {x}, [c, h, w, out_h, out_w](Node& node) {
        Tensor& g = node.parents[0]->ensure_grad();
        double sy = out_h > 1 ? static_cast<double>(h - 1) / (out_h - 1) : 0.0;
        double sx = out_w > 1 ? static_cast<double>(w - 1) / (out_w - 1) : 0.0;
        for (int oy = 0; oy < out_h; ++oy)
            for (int ox = 0; ox < out_w; ++ox) {
                double fy = oy * sy, fx = ox * sx;
                int y0 = std::min(static_cast<int>(std::floor(fy)), h - 1);
                int x0 = std::min(static_cast<int>(std::floor(fx)), w - 1);
                int y1 = std::min(y0 + 1, h - 1), x1 = std::min(x0 + 1, w - 1);
                double dy = fy - y0, dx = fx - x0;
                for (int ci = 0; ci < c; ++ci) {
                    double gv = node.grad.at(ci, oy, ox);
                    if (gv == 0.0) continue;
                    g.at(ci, y0, x0) += gv * (1 - dy) * (1 - dx);
                    g.at(ci, y0, x1) += gv * (1 - dy) * dx;
                    g.at(ci, y1, x0) += gv * dy * (1 - dx);
                    g.at(ci, y1, x1) += gv * dy * dx;
                }
            }
    });
}

Var local_correlation_op(const Var& a, const Var& b, int radius) {
    check_3d(a, "local_correlation");
    check_3d(b, "local_correlation");
    if (!a.value().same_shape(b.value()))
        throw DimensionError("local_correlation: feature shapes differ");
    if (radius < 0) throw ArgumentError("local_correlation: radius must be >= 0");
    int c = a.value().dim(0), h = a.value().dim(1), w = a.value().dim(2);
    int side = 2 * radius + 1;
    Tensor out(Shape{side * side, h, w});
    const Tensor& av = a.value();
    const Tensor& bv = b.value();
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx) {
            int ch = (dy + radius) * side + (dx + radius);
            for (int y = 0; y < h; ++y) {
                int by = y + dy;
                if (by < 0 || by >= h) continue;
                for (int x = 0; x < w; ++x) {
                    int bx = x + dx;
                    if (bx < 0 || bx >= w) continue;
                    double acc = 0.0;
                    for (int ci = 0; ci < c; ++ci) acc += av.at(ci, y, x) * bv.at(ci, by, bx);
                    out.at(ch, y, x) = acc / c;
                }
            }
        }
    return make_op(std::move(out), {a, b}, [c, h, w, radius, side](Node& node) {
        const Tensor& av = node.parents[0]->value;
        const Tensor& bv = node.parents[1]->value;
        bool need_a = node.parents[0]->requires_grad;
        bool need_b = node.parents[1]->requires_grad;
        Tensor* ga = need_a ? &node.parents[0]->ensure_grad() : nullptr;
        Tensor* gb = need_b ? &node.parents[1]->ensure_grad() : nullptr;
        double inv_c = 1.0 / c;
        for (int dy = -radius; dy <= radius; ++dy)
            for (int dx = -radius; dx <= radius; ++dx) {
                int ch = (dy + radius) * side + (dx + radius);
                for (int y = 0; y < h; ++y) {
                    int by = y + dy;
                    if (by < 0 || by >= h) continue;
                    for (int x = 0; x < w; ++x) {
                        int bx = x + dx;
                        if (bx < 0 || bx >= w) continue;
                        double g = node.grad.at(ch, y, x) * inv_c;
                        if (g == 0.0) continue;
                        for (int ci = 0; ci < c; ++ci) {
                            if (ga) ga->at(ci, y, x) += g * bv.at(ci, by, bx);
                            if (gb) gb->at(ci, by, bx) += g * av.at(ci, y, x);
                        }
                    }
                }
            }
    });
}

Var concat_channels(const std::vector<Var>& parts) {
    if (parts.empty()) throw ArgumentError("concat_channels: empty input");
    int h = parts[0].value().dim(1), w = parts[0].value().dim(2);
    int total = 0;
    for (const auto& p : parts) {
        check_3d(p, "concat_channels");
        if (p.value().dim(1) != h || p.value().dim(2) != w)
            throw DimensionError("concat_channels: spatial dims differ");
        total += p.value().dim(0);
    }
    Tensor out(Shape{total, h, w});
    int c0 = 0;
    for (const auto& p : parts) {
        int pc = p.value().dim(0);
        for (int ci = 0; ci < pc; ++ci)
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) out.at(c0 + ci, y, x) = p.value().at(ci, y, x);
        c0 += pc;
    }
    return make_op(std::move(out), parts, [h, w](Node& node) {
        int c0 = 0;
        for (auto& par : node.parents) {
            int pc = par->value.dim(0);
            if (par->requires_grad) {
                Tensor& g = par->ensure_grad();
                for (int ci = 0; ci < pc; ++ci)
                    for (int y = 0; y < h; ++y)
                        for (int x = 0; x < w; ++x) g.at(ci, y, x) += node.grad.at(c0 + ci, y, x);
            }
            c0 += pc;
        }
    });
}

Var slice_channels(const Var& x, int c0, int c1) {
    check_3d(x, "slice_channels");
    int c = x.value().dim(0), h = x.value().dim(1), w = x.value().dim(2);
    if (c0 < 0 || c1 > c || c0 >= c1) throw ArgumentError("slice_channels: bad range");
    Tensor out(Shape{c1 - c0, h, w});
    for (int ci = c0; ci < c1; ++ci)
        for (int y = 0; y < h; ++y)
            for (int x2 = 0; x2 < w; ++x2) out.at(ci - c0, y, x2) = x.value().at(ci, y, x2);
    return make_op(std::move(out), {x}, [c0, c1, h, w](Node& node) {
        Tensor& g = node.parents[0]->ensure_grad();
        for (int ci = c0; ci < c1; ++ci)
            for (int y = 0; y < h; ++y)
                for (int x2 = 0; x2 < w; ++x2) g.at(ci, y, x2) += node.grad.at(ci - c0, y, x2);
    });
}

Var add_channel_bias(const Var& x, const Var& bias) {
    check_3d(x, "add_channel_bias");
    int c = x.value().dim(0), h = x.value().dim(1), w = x.value().dim(2);
    if (bias.value().numel() != c) throw DimensionError("add_channel_bias: bias size mismatch");
    Tensor out(Shape{c, h, w});
    for (int ci = 0; ci < c; ++ci)
        for (int y = 0; y < h; ++y)
            for (int x2 = 0; x2 < w; ++x2)
                out.at(ci, y, x2) = x.value().at(ci, y, x2) + bias.value()[ci];
    return make_op(std::move(out), {x, bias}, [c, h, w](Node& node) {
        if (node.parents[0]->requires_grad) {
            Tensor& g = node.parents[0]->ensure_grad();
            for (int i = 0; i < g.numel(); ++i) g[i] += node.grad[i];
        }
        if (node.parents[1]->requires_grad) {
            Tensor& g = node.parents[1]->ensure_grad();
            for (int ci = 0; ci < c; ++ci)
                for (int y = 0; y < h; ++y)
                    for (int x2 = 0; x2 < w; ++x2) g[ci] += node.grad.at(ci, y, x2);
        }
    });
}

Var chw_to_rows(const Var& x) {
    check_3d(x, "chw_to_rows");
    int c = x.value().dim(0), h = x.value().dim(1), w = x.value().dim(2);
    Tensor out(Shape{h * w, c});
    for (int ci = 0; ci < c; ++ci)
        for (int y = 0; y < h; ++y)
            for (int x2 = 0; x2 < w; ++x2) out.at(y * w + x2, ci) = x.value().at(ci, y, x2);
    return make_op(std::move(out), {x}, [c, h, w](Node& node) {
        Tensor& g = node.parents[0]->ensure_grad();
        for (int ci = 0; ci < c; ++ci)
            for (int y = 0; y < h; ++y)
                for (int x2 = 0; x2 < w; ++x2) g.at(ci, y, x2) += node.grad.at(y * w + x2, ci);
    });
}

Var rows_to_chw(const Var& x, int h, int w) {
    check_2d(x, "rows_to_chw");
    int rows = x.value().dim(0), c = x.value().dim(1);
    if (rows != h * w) throw DimensionError("rows_to_chw: row count does not match h*w");
    Tensor out(Shape{c, h, w});
    for (int ci = 0; ci < c; ++ci)
        for (int y = 0; y < h; ++y)
            for (int x2 = 0; x2 < w; ++x2) out.at(ci, y, x2) = x.value().at(y * w + x2, ci);
    return make_op(std::move(out), {x}, [c, h, w](Node& node) {
        Tensor& g = node.parents[0]->ensure_grad();
        for (int ci = 0; ci < c; ++ci)
            for (int y = 0; y < h; ++y)
                for (int x2 = 0; x2 < w; ++x2) g.at(y * w + x2, ci) += node.grad.at(ci, y, x2);
    });
}

Var flow_smoothness(const Var& flow, int order) {
    check_3d(flow, "flow_smoothness");
    if (order != 1 && order != 2) throw ArgumentError("flow_smoothness: order must be 1 or 2");
    int c = flow.value().dim(0), h = flow.value().dim(1), w = flow.value().dim(2);
    const Tensor& f = flow.value();
    double acc = 0.0;
    long count = 0;
    if (order == 1) {
        for (int ci = 0; ci < c; ++ci)
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    if (x + 1 < w) {
                        double d = f.at(ci, y, x + 1) - f.at(ci, y, x);
                        acc += d * d;
                        ++count;
                    }
                    if (y + 1 < h) {
                        double d = f.at(ci, y + 1, x) - f.at(ci, y, x);
                        acc += d * d;
                        ++count;
                    }
                }
    } else {
        for (int ci = 0; ci < c; ++ci)
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    if (x + 1 < w && x - 1 >= 0) {
                        double d = f.at(ci, y, x + 1) - 2 * f.at(ci, y, x) + f.at(ci, y, x - 1);
                        acc += d * d;
                        ++count;
                    }
                    if (y + 1 < h && y - 1 >= 0) {
                        double d = f.at(ci, y + 1, x) - 2 * f.at(ci, y, x) + f.at(ci, y - 1, x);
                        acc += d * d;
                        ++count;
                    }
                }
    }
    Tensor out = Tensor::scalar(count > 0 ? acc / count : 0.0);
    return make_op(std::move(out), {flow}, [c, h, w, order, count](Node& node) {
        if (count == 0) return;
        const Tensor& f = node.parents[0]->value;
        Tensor& g = node.parents[0]->ensure_grad();
        double gv = node.grad[0] / static_cast<double>(count);
        if (order == 1) {
            for (int ci = 0; ci < c; ++ci)
                for (int y = 0; y < h; ++y)
                    for (int x = 0; x < w; ++x) {
                        if (x + 1 < w) {
                            double d = 2 * gv * (f.at(ci, y, x + 1) - f.at(ci, y, x));
                            g.at(ci, y, x + 1) += d;
                            g.at(ci, y, x) -= d;
                        }
                        if (y + 1 < h) {
                            double d = 2 * gv * (f.at(ci, y + 1, x) - f.at(ci, y, x));
                            g.at(ci, y + 1, x) += d;
                            g.at(ci, y, x) -= d;
                        }
                    }
        } else {
            for (int ci = 0; ci < c; ++ci)
                for (int y = 0; y < h; ++y)
                    for (int x = 0; x < w; ++x) {
                        if (x + 1 < w && x - 1 >= 0) {
                            double d = 2 * gv * (f.at(ci, y, x + 1) - 2 * f.at(ci, y, x) +
                                                 f.at(ci, y, x - 1));
                            g.at(ci, y, x + 1) += d;
                            g.at(ci, y, x) -= 2 * d;
                            g.at(ci, y, x - 1) += d;
                        }
                        if (y + 1 < h && y - 1 >= 0) {
                            double d = 2 * gv * (f.at(ci, y + 1, x) - 2 * f.at(ci, y, x) +
                                                 f.at(ci, y - 1, x));
                            g.at(ci, y + 1, x) += d;
                            g.at(ci, y, x) -= 2 * d;
                            g.at(ci, y - 1, x) += d;
                        }
                    }
        }
    });
}

}  // namespace tryon::core
