// Copyright 2026-present the linkoracle project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <memory>

#include "linkoracle/kernels/kernels.hpp"
#include "linkoracle/nn/graph.hpp"

namespace linkoracle::nn {

namespace {

constexpr double kCeEps = 1e-7;

double act_grad_from_output(Activation a, double y) {
    switch (a) {
    case Activation::identity: return 1.0;
    case Activation::relu: return y > 0.0 ? 1.0 : 0.0;
    case Activation::sigmoid: return y * (1.0 - y);
    case Activation::tanh: return 1.0 - y * y;
    }
    return 1.0;
}

} // namespace

double stable_sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double apply_activation(Activation a, double x) {
    switch (a) {
    case Activation::identity: return x;
    case Activation::relu: return x > 0.0 ? x : 0.0;
    case Activation::sigmoid: return stable_sigmoid(x);
    case Activation::tanh: return std::tanh(x);
    }
    return x;
}

Graph::VarId Graph::push(Tensor value, std::function<void(Graph&)> back) {
    Node n;
    n.grad = Tensor::zeros(value.shape);
    n.value = std::move(value);
    n.back = std::move(back);
    nodes_.push_back(std::move(n));
    return static_cast<VarId>(nodes_.size() - 1);
}

Graph::VarId Graph::constant(Tensor v) { return push(std::move(v), nullptr); }

Graph::VarId Graph::param(const std::string& name) {
    auto it = param_nodes_.find(name);
    if (it != param_nodes_.end()) {
        return it->second;
    }
    if (!store_) {
        throw Error("graph has no parameter store");
    }
    const VarId id = push(store_->value(name), nullptr);
    param_nodes_.emplace(name, id);
    return id;
}

Graph::VarId Graph::embedding_lookup(VarId table, std::vector<int> ids) {
    const Tensor& tab = value(table);
    const std::size_t n = tab.rows(), k = tab.cols(), l = ids.size();
    for (int id : ids) {
        if (id < 0 || static_cast<std::size_t>(id) >= k) {
            throw IdOutOfRange("embedding id " + std::to_string(id) + " out of range [0, " +
                               std::to_string(k) + ")");
        }
    }
    Tensor out = Tensor::zeros({n, l});
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < l; ++j) {
            out.at(r, j) = tab.at(r, static_cast<std::size_t>(ids[j]));
        }
    }
    return push(std::move(out), [table, ids, n, l, self = nodes_.size()](Graph& g) {
        const Tensor& go = g.grad(static_cast<VarId>(self));
        Tensor& gt = g.grad_mut(table);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t j = 0; j < l; ++j) {
                gt.at(r, static_cast<std::size_t>(ids[j])) += go.at(r, j);
            }
        }
    });
}

Graph::VarId Graph::conv1d_max(VarId x, VarId w, VarId b, std::size_t ksize, std::size_t n_pos) {
    const Tensor& xv = value(x);
    const Tensor& wv = value(w);
    const Tensor& bv = value(b);
    const std::size_t n = xv.rows(), l = xv.cols(), count = bv.numel();
    if (l < ksize) {
        throw InputTooShort("conv input length " + std::to_string(l) + " < kernel size " +
                            std::to_string(ksize));
    }
    if (n_pos == 0 || n_pos > l - ksize + 1) {
        throw ShapeMismatch("invalid pooling position count");
    }
    if (wv.rows() != count || wv.cols() != ksize * n) {
        throw ShapeMismatch("conv weight shape");
    }

    Tensor out = Tensor::zeros({count});
    std::vector<std::size_t> argmax(count, 0);
    std::vector<double> premax(count, 0.0); // pre-relu response at argmax
    std::vector<double> acts(n_pos);
    for (std::size_t kid = 0; kid < count; ++kid) {
        std::fill(acts.begin(), acts.end(), bv.at(kid));
        const double* wrow = wv.row_ptr(kid);
        for (std::size_t u = 0; u < ksize; ++u) {
            for (std::size_t r = 0; r < n; ++r) {
                kernels::axpy(acts.data(), wrow[u * n + r], xv.row_ptr(r) + u, n_pos);
            }
        }
        std::size_t best = 0;
        for (std::size_t pos = 1; pos < n_pos; ++pos) {
            if (acts[pos] > acts[best]) {
                best = pos;
            }
        }
        argmax[kid] = best;
        premax[kid] = acts[best];
        out.at(kid) = acts[best] > 0.0 ? acts[best] : 0.0;
    }

    return push(std::move(out), [x, w, b, ksize, n, l, count, argmax = std::move(argmax),
                                 premax = std::move(premax), self = nodes_.size()](Graph& g) {
        const Tensor& go = g.grad(static_cast<VarId>(self));
        const Tensor& xv = g.value(x);
        const Tensor& wv = g.value(w);
        Tensor& gx = g.grad_mut(x);
        Tensor& gw = g.grad_mut(w);
        Tensor& gb = g.grad_mut(b);
        for (std::size_t kid = 0; kid < count; ++kid) {
            if (premax[kid] <= 0.0) {
                continue; // relu gate closed
            }
            const double gout = go.at(kid);
            if (gout == 0.0) {
                continue;
            }
            const std::size_t pos = argmax[kid];
            gb.at(kid) += gout;
            const double* wrow = wv.row_ptr(kid);
            double* gwrow = gw.row_ptr(kid);
            for (std::size_t u = 0; u < ksize; ++u) {
                for (std::size_t r = 0; r < n; ++r) {
                    gwrow[u * n + r] += gout * xv.at(r, pos + u);
                    gx.at(r, pos + u) += gout * wrow[u * n + r];
                }
            }
        }
        (void)l;
    });
}

Graph::VarId Graph::dense(VarId x, VarId w, VarId b, Activation act) {
    const Tensor& xv = value(x);
    const Tensor& wv = value(w);
    const Tensor& bv = value(b);
    const std::size_t m = xv.numel(), n = bv.numel();
    if (wv.rows() != m || wv.cols() != n) {
        throw ShapeMismatch("dense: w is " + std::to_string(wv.rows()) + "x" +
                            std::to_string(wv.cols()) + ", expected " + std::to_string(m) + "x" +
                            std::to_string(n));
    }
    Tensor out = Tensor::zeros({n});
    for (std::size_t i = 0; i < n; ++i) {
        out.at(i) = bv.at(i);
    }
    for (std::size_t j = 0; j < m; ++j) {
        kernels::axpy(out.data.data(), xv.at(j), wv.row_ptr(j), n);
    }
    for (std::size_t i = 0; i < n; ++i) {
        out.at(i) = apply_activation(act, out.at(i));
    }
    return push(std::move(out), [x, w, b, act, m, n, self = nodes_.size()](Graph& g) {
        const VarId id = static_cast<VarId>(self);
        const Tensor& go = g.grad(id);
        const Tensor& yv = g.value(id);
        const Tensor& xv = g.value(x);
        const Tensor& wv = g.value(w);
        std::vector<double> delta(n);
        for (std::size_t i = 0; i < n; ++i) {
            delta[i] = go.at(i) * act_grad_from_output(act, yv.at(i));
        }
        Tensor& gb = g.grad_mut(b);
        for (std::size_t i = 0; i < n; ++i) {
            gb.at(i) += delta[i];
        }
        Tensor& gw = g.grad_mut(w);
        Tensor& gx = g.grad_mut(x);
        for (std::size_t j = 0; j < m; ++j) {
            kernels::axpy(gw.row_ptr(j), xv.at(j), delta.data(), n);
            gx.at(j) += kernels::dot(wv.row_ptr(j), delta.data(), n);
        }
    });
}

Graph::VarId Graph::lstm_final(VarId xs, const LstmVars& p, std::size_t hidden) {
    const Tensor& xv = value(xs);
    const std::size_t m = xv.rows(), l = xv.cols(), h = hidden;
    if (l < 1) {
        throw ShapeMismatch("lstm needs at least one step");
    }
    auto check = [&](VarId wid, std::size_t r, std::size_t c, const char* what) {
        const Tensor& t = value(wid);
        if (t.rows() != r || (c != 0 && t.cols() != c) || (c == 0 && t.shape.size() > 1)) {
            throw ShapeMismatch(std::string("lstm ") + what);
        }
    };
    check(p.wi, m, h, "wi");
    check(p.ui, h, h, "ui");
    check(p.bi, h, 0, "bi");

    // Per-step caches for BPTT.
    struct Step {
        std::vector<double> i, f, o, u, c, tanh_c, h;
    };
    auto steps = std::make_shared<std::vector<Step>>(l);
    std::vector<double> hprev(h, 0.0), cprev(h, 0.0);
    std::vector<double> zi(h), zf(h), zo(h), zu(h), xt(m);

    const Tensor &wi = value(p.wi), &ui = value(p.ui), &bi = value(p.bi);
    const Tensor &wf = value(p.wf), &uf = value(p.uf), &bf = value(p.bf);
    const Tensor &wo = value(p.wo), &uo = value(p.uo), &bo = value(p.bo);
    const Tensor &wu = value(p.wu), &uu = value(p.uu), &bu = value(p.bu);

    for (std::size_t t = 0; t < l; ++t) {
        for (std::size_t r = 0; r < m; ++r) {
            xt[r] = xv.at(r, t);
        }
        for (std::size_t i = 0; i < h; ++i) {
            zi[i] = bi.at(i);
            zf[i] = bf.at(i);
            zo[i] = bo.at(i);
            zu[i] = bu.at(i);
        }
        for (std::size_t r = 0; r < m; ++r) {
            kernels::axpy(zi.data(), xt[r], wi.row_ptr(r), h);
            kernels::axpy(zf.data(), xt[r], wf.row_ptr(r), h);
            kernels::axpy(zo.data(), xt[r], wo.row_ptr(r), h);
            kernels::axpy(zu.data(), xt[r], wu.row_ptr(r), h);
        }
        for (std::size_t r = 0; r < h; ++r) {
            kernels::axpy(zi.data(), hprev[r], ui.row_ptr(r), h);
            kernels::axpy(zf.data(), hprev[r], uf.row_ptr(r), h);
            kernels::axpy(zo.data(), hprev[r], uo.row_ptr(r), h);
            kernels::axpy(zu.data(), hprev[r], uu.row_ptr(r), h);
        }
        Step& st = (*steps)[t];
        st.i.resize(h);
        st.f.resize(h);
        st.o.resize(h);
        st.u.resize(h);
        st.c.resize(h);
        st.tanh_c.resize(h);
        st.h.resize(h);
        for (std::size_t i = 0; i < h; ++i) {
            st.i[i] = stable_sigmoid(zi[i]);
            st.f[i] = stable_sigmoid(zf[i]);
            st.o[i] = stable_sigmoid(zo[i]);
            st.u[i] = std::tanh(zu[i]);
            st.c[i] = st.f[i] * cprev[i] + st.i[i] * st.u[i];
            st.tanh_c[i] = std::tanh(st.c[i]);
            st.h[i] = st.o[i] * st.tanh_c[i];
        }
        cprev = st.c;
        hprev = st.h;
    }

    Tensor out = Tensor::zeros({h});
    for (std::size_t i = 0; i < h; ++i) {
        out.at(i) = hprev[i];
    }

    return push(std::move(out), [xs, p, steps, m, l, h, self = nodes_.size()](Graph& g) {
        const VarId id = static_cast<VarId>(self);
        const Tensor& xv = g.value(xs);
        const Tensor &wi = g.value(p.wi), &ui = g.value(p.ui);
        const Tensor &wf = g.value(p.wf), &uf = g.value(p.uf);
        const Tensor &wo = g.value(p.wo), &uo = g.value(p.uo);
        const Tensor &wu = g.value(p.wu), &uu = g.value(p.uu);
        Tensor &gwi = g.grad_mut(p.wi), &gui = g.grad_mut(p.ui), &gbi = g.grad_mut(p.bi);
        Tensor &gwf = g.grad_mut(p.wf), &guf = g.grad_mut(p.uf), &gbf = g.grad_mut(p.bf);
        Tensor &gwo = g.grad_mut(p.wo), &guo = g.grad_mut(p.uo), &gbo = g.grad_mut(p.bo);
        Tensor &gwu = g.grad_mut(p.wu), &guu = g.grad_mut(p.uu), &gbu = g.grad_mut(p.bu);
        Tensor& gxs = g.grad_mut(xs);

        std::vector<double> gh(h), gc(h, 0.0), ghprev(h), dzi(h), dzf(h), dzo(h), dzu(h), xt(m);
        const Tensor& gout = g.grad(id);
        for (std::size_t i = 0; i < h; ++i) {
            gh[i] = gout.at(i);
        }
        for (std::size_t t = l; t-- > 0;) {
            const Step& st = (*steps)[t];
            const std::vector<double>* cm1 = t > 0 ? &(*steps)[t - 1].c : nullptr;
            for (std::size_t i = 0; i < h; ++i) {
                const double go_ = gh[i] * st.tanh_c[i];
                const double gct = gc[i] + gh[i] * st.o[i] * (1.0 - st.tanh_c[i] * st.tanh_c[i]);
                const double gi = gct * st.u[i];
                const double gu = gct * st.i[i];
                const double cprev_i = cm1 ? (*cm1)[i] : 0.0;
                const double gf = gct * cprev_i;
                dzi[i] = gi * st.i[i] * (1.0 - st.i[i]);
                dzf[i] = gf * st.f[i] * (1.0 - st.f[i]);
                dzo[i] = go_ * st.o[i] * (1.0 - st.o[i]);
                dzu[i] = gu * (1.0 - st.u[i] * st.u[i]);
                gc[i] = gct * st.f[i]; // to c_{t-1}
            }
            for (std::size_t i = 0; i < h; ++i) {
                gbi.at(i) += dzi[i];
                gbf.at(i) += dzf[i];
                gbo.at(i) += dzo[i];
                gbu.at(i) += dzu[i];
            }
            for (std::size_t r = 0; r < m; ++r) {
                xt[r] = xv.at(r, t);
            }
            for (std::size_t r = 0; r < m; ++r) {
                kernels::axpy(gwi.row_ptr(r), xt[r], dzi.data(), h);
                kernels::axpy(gwf.row_ptr(r), xt[r], dzf.data(), h);
                kernels::axpy(gwo.row_ptr(r), xt[r], dzo.data(), h);
                kernels::axpy(gwu.row_ptr(r), xt[r], dzu.data(), h);
                double gx = kernels::dot(wi.row_ptr(r), dzi.data(), h);
                gx += kernels::dot(wf.row_ptr(r), dzf.data(), h);
                gx += kernels::dot(wo.row_ptr(r), dzo.data(), h);
                gx += kernels::dot(wu.row_ptr(r), dzu.data(), h);
                gxs.at(r, t) += gx;
            }
            if (t > 0) {
                const std::vector<double>& hm1 = (*steps)[t - 1].h;
                for (std::size_t r = 0; r < h; ++r) {
                    kernels::axpy(gui.row_ptr(r), hm1[r], dzi.data(), h);
                    kernels::axpy(guf.row_ptr(r), hm1[r], dzf.data(), h);
                    kernels::axpy(guo.row_ptr(r), hm1[r], dzo.data(), h);
                    kernels::axpy(guu.row_ptr(r), hm1[r], dzu.data(), h);
                    double ghp = kernels::dot(ui.row_ptr(r), dzi.data(), h);
                    ghp += kernels::dot(uf.row_ptr(r), dzf.data(), h);
                    ghp += kernels::dot(uo.row_ptr(r), dzo.data(), h);
                    ghp += kernels::dot(uu.row_ptr(r), dzu.data(), h);
                    ghprev[r] = ghp;
                }
                gh = ghprev;
            }
        }
    });
}

namespace {

// z += Uᵀ v, with U: [d, d] row-major.
void add_ut_vec(std::vector<double>& z, const Tensor& u, const double* v, std::size_t d) {
    for (std::size_t r = 0; r < d; ++r) {
        kernels::axpy(z.data(), v[r], u.row_ptr(r), d);
    }
}

// gU.row(r) += v[r]·dz  and  gv[r] += U.row(r)·dz
void backprop_ut_vec(Tensor& gu, const Tensor& u, const double* v, double* gv,
                     const std::vector<double>& dz, std::size_t d) {
    for (std::size_t r = 0; r < d; ++r) {
        kernels::axpy(gu.row_ptr(r), v[r], dz.data(), d);
        gv[r] += kernels::dot(u.row_ptr(r), dz.data(), d);
    }
}

} // namespace

Graph::HC Graph::childsum_treelstm(const std::vector<HC>& children, std::optional<VarId> x,
                                   const ChildSumVars& p, std::size_t dim) {
    const std::size_t d = dim;
    for (const auto& ch : children) {
        require_shape(value(ch.h), d, "childsum child h");
        require_shape(value(ch.c), d, "childsum child c");
    }
    if (x) {
        if (!p.wi || !p.wf || !p.wo || !p.wu) {
            throw ShapeMismatch("childsum: x supplied but no input weights");
        }
    }
    const Tensor &ui = value(p.ui), &uf = value(p.uf), &uo = value(p.uo), &uu = value(p.uu);
    const Tensor &bi = value(p.bi), &bf = value(p.bf), &bo = value(p.bo), &bu = value(p.bu);
    require_shape(bi, d, "childsum bi");

    const std::size_t nch = children.size();
    std::vector<double> hsum(d, 0.0);
    for (const auto& ch : children) {
        const Tensor& hv = value(ch.h);
        for (std::size_t i = 0; i < d; ++i) {
            hsum[i] += hv.at(i);
        }
    }
    std::vector<double> zi(d), zo(d), zu(d);
    for (std::size_t i = 0; i < d; ++i) {
        zi[i] = bi.at(i);
        zo[i] = bo.at(i);
        zu[i] = bu.at(i);
    }
    add_ut_vec(zi, ui, hsum.data(), d);
    add_ut_vec(zo, uo, hsum.data(), d);
    add_ut_vec(zu, uu, hsum.data(), d);
    if (x) {
        const Tensor& xv = value(*x);
        const std::size_t m = xv.numel();
        for (std::size_t r = 0; r < m; ++r) {
            kernels::axpy(zi.data(), xv.at(r), value(*p.wi).row_ptr(r), d);
            kernels::axpy(zo.data(), xv.at(r), value(*p.wo).row_ptr(r), d);
            kernels::axpy(zu.data(), xv.at(r), value(*p.wu).row_ptr(r), d);
        }
    }
    auto gates_i = std::make_shared<std::vector<double>>(d);
    auto gates_o = std::make_shared<std::vector<double>>(d);
    auto gates_u = std::make_shared<std::vector<double>>(d);
    for (std::size_t i = 0; i < d; ++i) {
        (*gates_i)[i] = stable_sigmoid(zi[i]);
        (*gates_o)[i] = stable_sigmoid(zo[i]);
        (*gates_u)[i] = std::tanh(zu[i]);
    }

    // Per-child forget gates share (wf, uf, bf); each sees its own child h.
    auto forgets = std::make_shared<std::vector<std::vector<double>>>(nch);
    std::vector<double> zf(d);
    for (std::size_t k = 0; k < nch; ++k) {
        for (std::size_t i = 0; i < d; ++i) {
            zf[i] = bf.at(i);
        }
        const Tensor& hk = value(children[k].h);
        add_ut_vec(zf, uf, hk.data.data(), d);
        if (x) {
            const Tensor& xv = value(*x);
            for (std::size_t r = 0; r < xv.numel(); ++r) {
                kernels::axpy(zf.data(), xv.at(r), value(*p.wf).row_ptr(r), d);
            }
        }
        (*forgets)[k].resize(d);
        for (std::size_t i = 0; i < d; ++i) {
            (*forgets)[k][i] = stable_sigmoid(zf[i]);
        }
    }

    Tensor cval = Tensor::zeros({d});
    for (std::size_t i = 0; i < d; ++i) {
        cval.at(i) = (*gates_i)[i] * (*gates_u)[i];
    }
    for (std::size_t k = 0; k < nch; ++k) {
        const Tensor& ck = value(children[k].c);
        for (std::size_t i = 0; i < d; ++i) {
            cval.at(i) += (*forgets)[k][i] * ck.at(i);
        }
    }
    auto tanh_c = std::make_shared<std::vector<double>>(d);
    Tensor hval = Tensor::zeros({d});
    for (std::size_t i = 0; i < d; ++i) {
        (*tanh_c)[i] = std::tanh(cval.at(i));
        hval.at(i) = (*gates_o)[i] * (*tanh_c)[i];
    }

    auto hsum_keep = std::make_shared<std::vector<double>>(std::move(hsum));
    const VarId c_id = push(std::move(cval), nullptr); // gradient handled by the h node's closure
    const VarId h_id = push(
        std::move(hval),
        [children, x, p, d, c_id, gates_i, gates_o, gates_u, forgets, tanh_c, hsum_keep,
         self = nodes_.size()](Graph& g) {
            const VarId h_id_ = static_cast<VarId>(self);
            const Tensor& gh = g.grad(h_id_);
            const Tensor& gc_ext = g.grad(c_id); // external consumers of c
            const std::size_t nch = children.size();

            std::vector<double> gct(d), dzi(d), dzo(d), dzu(d);
            for (std::size_t i = 0; i < d; ++i) {
                const double ghi = gh.at(i);
                const double go_ = ghi * (*tanh_c)[i];
                gct[i] =
                    gc_ext.at(i) + ghi * (*gates_o)[i] * (1.0 - (*tanh_c)[i] * (*tanh_c)[i]);
                const double gi = gct[i] * (*gates_u)[i];
                const double gu = gct[i] * (*gates_i)[i];
                dzi[i] = gi * (*gates_i)[i] * (1.0 - (*gates_i)[i]);
                dzo[i] = go_ * (*gates_o)[i] * (1.0 - (*gates_o)[i]);
                dzu[i] = gu * (1.0 - (*gates_u)[i] * (*gates_u)[i]);
            }
            Tensor &gbi = g.grad_mut(p.bi), &gbo = g.grad_mut(p.bo), &gbu = g.grad_mut(p.bu);
            for (std::size_t i = 0; i < d; ++i) {
                gbi.at(i) += dzi[i];
                gbo.at(i) += dzo[i];
                gbu.at(i) += dzu[i];
            }
            // h̃ path: shared by i, o, u gates.
            std::vector<double> ghsum(d, 0.0);
            backprop_ut_vec(g.grad_mut(p.ui), g.value(p.ui), hsum_keep->data(), ghsum.data(),
                            dzi, d);
            backprop_ut_vec(g.grad_mut(p.uo), g.value(p.uo), hsum_keep->data(), ghsum.data(),
                            dzo, d);
            backprop_ut_vec(g.grad_mut(p.uu), g.value(p.uu), hsum_keep->data(), ghsum.data(),
                            dzu, d);
            if (x) {
                const Tensor& xv = g.value(*x);
                Tensor& gx = g.grad_mut(*x);
                for (std::size_t r = 0; r < xv.numel(); ++r) {
                    kernels::axpy(g.grad_mut(*p.wi).row_ptr(r), xv.at(r), dzi.data(), d);
                    kernels::axpy(g.grad_mut(*p.wo).row_ptr(r), xv.at(r), dzo.data(), d);
                    kernels::axpy(g.grad_mut(*p.wu).row_ptr(r), xv.at(r), dzu.data(), d);
                    double gxr = kernels::dot(g.value(*p.wi).row_ptr(r), dzi.data(), d);
                    gxr += kernels::dot(g.value(*p.wo).row_ptr(r), dzo.data(), d);
                    gxr += kernels::dot(g.value(*p.wu).row_ptr(r), dzu.data(), d);
                    gx.at(r) += gxr;
                }
            }
            // Forget gates, per child.
            std::vector<double> dzf(d);
            for (std::size_t k = 0; k < nch; ++k) {
                const Tensor& ck = g.value(children[k].c);
                const auto& fk = (*forgets)[k];
                for (std::size_t i = 0; i < d; ++i) {
                    const double gf = gct[i] * ck.at(i);
                    dzf[i] = gf * fk[i] * (1.0 - fk[i]);
                }
                Tensor& gbf = g.grad_mut(p.bf);
                for (std::size_t i = 0; i < d; ++i) {
                    gbf.at(i) += dzf[i];
                }
                backprop_ut_vec(g.grad_mut(p.uf), g.value(p.uf),
                                g.value(children[k].h).data.data(),
                                g.grad_mut(children[k].h).data.data(), dzf, d);
                if (x) {
                    const Tensor& xv = g.value(*x);
                    Tensor& gx = g.grad_mut(*x);
                    for (std::size_t r = 0; r < xv.numel(); ++r) {
                        kernels::axpy(g.grad_mut(*p.wf).row_ptr(r), xv.at(r), dzf.data(), d);
                        gx.at(r) += kernels::dot(g.value(*p.wf).row_ptr(r), dzf.data(), d);
                    }
                }
                Tensor& gck = g.grad_mut(children[k].c);
                for (std::size_t i = 0; i < d; ++i) {
                    gck.at(i) += gct[i] * fk[i];
                }
            }
            // h̃ = Σ h_k: fan the summed gradient out to every child h.
            for (std::size_t k = 0; k < nch; ++k) {
                Tensor& ghk = g.grad_mut(children[k].h);
                for (std::size_t i = 0; i < d; ++i) {
                    ghk.at(i) += ghsum[i];
                }
            }
        });
    return {h_id, c_id};
}

Graph::HC Graph::binary_treelstm(const HC& left, const HC& right, std::optional<VarId> x,
                                 const BinaryTreeVars& p, std::size_t dim) {
    const std::size_t d = dim;
    require_shape(value(left.h), d, "binary tree left h");
    require_shape(value(right.h), d, "binary tree right h");
    require_shape(value(left.c), d, "binary tree left c");
    require_shape(value(right.c), d, "binary tree right c");
    if (x && (!p.wi || !p.wf || !p.wo || !p.wu)) {
        throw ShapeMismatch("binary tree: x supplied but no input weights");
    }

    const double* hl = value(left.h).data.data();
    const double* hr = value(right.h).data.data();

    auto gate = [&](VarId ul, VarId ur, VarId b, std::optional<VarId> w) {
        std::vector<double> z(d);
        const Tensor& bv = value(b);
        for (std::size_t i = 0; i < d; ++i) {
            z[i] = bv.at(i);
        }
        add_ut_vec(z, value(ul), hl, d);
        add_ut_vec(z, value(ur), hr, d);
        if (x) {
            const Tensor& xv = value(*x);
            for (std::size_t r = 0; r < xv.numel(); ++r) {
                kernels::axpy(z.data(), xv.at(r), value(*w).row_ptr(r), d);
            }
        }
        return z;
    };

    auto zi = gate(p.uil, p.uir, p.bi, p.wi);
    auto zfl = gate(p.ufll, p.uflr, p.bf, p.wf);
    auto zfr = gate(p.ufrl, p.ufrr, p.bf, p.wf);
    auto zo = gate(p.uol, p.uor, p.bo, p.wo);
    auto zu = gate(p.uul, p.uur, p.bu, p.wu);

    auto gi = std::make_shared<std::vector<double>>(d);
    auto gfl = std::make_shared<std::vector<double>>(d);
    auto gfr = std::make_shared<std::vector<double>>(d);
    auto go = std::make_shared<std::vector<double>>(d);
    auto gu = std::make_shared<std::vector<double>>(d);
    for (std::size_t i = 0; i < d; ++i) {
        (*gi)[i] = stable_sigmoid(zi[i]);
        (*gfl)[i] = stable_sigmoid(zfl[i]);
        (*gfr)[i] = stable_sigmoid(zfr[i]);
        (*go)[i] = stable_sigmoid(zo[i]);
        (*gu)[i] = std::tanh(zu[i]);
    }
    Tensor cval = Tensor::zeros({d});
    const Tensor& cl = value(left.c);
    const Tensor& cr = value(right.c);
    for (std::size_t i = 0; i < d; ++i) {
        cval.at(i) = (*gi)[i] * (*gu)[i] + (*gfl)[i] * cl.at(i) + (*gfr)[i] * cr.at(i);
    }
    auto tanh_c = std::make_shared<std::vector<double>>(d);
    Tensor hval = Tensor::zeros({d});
    for (std::size_t i = 0; i < d; ++i) {
        (*tanh_c)[i] = std::tanh(cval.at(i));
        hval.at(i) = (*go)[i] * (*tanh_c)[i];
    }

    const VarId c_id = push(std::move(cval), nullptr);
    const VarId h_id = push(std::move(hval), [left, right, x, p, d, c_id, gi, gfl, gfr, go, gu,
                                              tanh_c, self = nodes_.size()](Graph& g) {
        const VarId h_id_ = static_cast<VarId>(self);
        const Tensor& gh = g.grad(h_id_);
        const Tensor& gc_ext = g.grad(c_id);
        const double* hl = g.value(left.h).data.data();
        const double* hr = g.value(right.h).data.data();

        std::vector<double> gct(d), dzi(d), dzfl(d), dzfr(d), dzo(d), dzu(d);
        const Tensor& cl = g.value(left.c);
        const Tensor& cr = g.value(right.c);
        for (std::size_t i = 0; i < d; ++i) {
            const double ghi = gh.at(i);
            const double go_ = ghi * (*tanh_c)[i];
            gct[i] = gc_ext.at(i) + ghi * (*go)[i] * (1.0 - (*tanh_c)[i] * (*tanh_c)[i]);
            dzi[i] = gct[i] * (*gu)[i] * (*gi)[i] * (1.0 - (*gi)[i]);
            dzu[i] = gct[i] * (*gi)[i] * (1.0 - (*gu)[i] * (*gu)[i]);
            dzfl[i] = gct[i] * cl.at(i) * (*gfl)[i] * (1.0 - (*gfl)[i]);
            dzfr[i] = gct[i] * cr.at(i) * (*gfr)[i] * (1.0 - (*gfr)[i]);
            dzo[i] = go_ * (*go)[i] * (1.0 - (*go)[i]);
        }
        Tensor &gbi = g.grad_mut(p.bi), &gbf = g.grad_mut(p.bf);
        Tensor &gbo = g.grad_mut(p.bo), &gbu = g.grad_mut(p.bu);
        for (std::size_t i = 0; i < d; ++i) {
            gbi.at(i) += dzi[i];
            gbf.at(i) += dzfl[i] + dzfr[i];
            gbo.at(i) += dzo[i];
            gbu.at(i) += dzu[i];
        }
        double* ghl = g.grad_mut(left.h).data.data();
        double* ghr = g.grad_mut(right.h).data.data();
        backprop_ut_vec(g.grad_mut(p.uil), g.value(p.uil), hl, ghl, dzi, d);
        backprop_ut_vec(g.grad_mut(p.uir), g.value(p.uir), hr, ghr, dzi, d);
        backprop_ut_vec(g.grad_mut(p.ufll), g.value(p.ufll), hl, ghl, dzfl, d);
        backprop_ut_vec(g.grad_mut(p.uflr), g.value(p.uflr), hr, ghr, dzfl, d);
        backprop_ut_vec(g.grad_mut(p.ufrl), g.value(p.ufrl), hl, ghl, dzfr, d);
        backprop_ut_vec(g.grad_mut(p.ufrr), g.value(p.ufrr), hr, ghr, dzfr, d);
        backprop_ut_vec(g.grad_mut(p.uol), g.value(p.uol), hl, ghl, dzo, d);
        backprop_ut_vec(g.grad_mut(p.uor), g.value(p.uor), hr, ghr, dzo, d);
        backprop_ut_vec(g.grad_mut(p.uul), g.value(p.uul), hl, ghl, dzu, d);
        backprop_ut_vec(g.grad_mut(p.uur), g.value(p.uur), hr, ghr, dzu, d);
        if (x) {
            const Tensor& xv = g.value(*x);
            Tensor& gx = g.grad_mut(*x);
            for (std::size_t r = 0; r < xv.numel(); ++r) {
                kernels::axpy(g.grad_mut(*p.wi).row_ptr(r), xv.at(r), dzi.data(), d);
                kernels::axpy(g.grad_mut(*p.wo).row_ptr(r), xv.at(r), dzo.data(), d);
                kernels::axpy(g.grad_mut(*p.wu).row_ptr(r), xv.at(r), dzu.data(), d);
                double gxr = kernels::dot(g.value(*p.wi).row_ptr(r), dzi.data(), d);
                gxr += kernels::dot(g.value(*p.wo).row_ptr(r), dzo.data(), d);
                gxr += kernels::dot(g.value(*p.wu).row_ptr(r), dzu.data(), d);
                for (std::size_t pass = 0; pass < 2; ++pass) {
                    const auto& dzf = pass == 0 ? dzfl : dzfr;
                    kernels::axpy(g.grad_mut(*p.wf).row_ptr(r), xv.at(r), dzf.data(), d);
                    gxr += kernels::dot(g.value(*p.wf).row_ptr(r), dzf.data(), d);
                }
                gx.at(r) += gxr;
            }
        }
        Tensor& gcl = g.grad_mut(left.c);
        Tensor& gcr = g.grad_mut(right.c);
        for (std::size_t i = 0; i < d; ++i) {
            gcl.at(i) += gct[i] * (*gfl)[i];
            gcr.at(i) += gct[i] * (*gfr)[i];
        }
    });
    return {h_id, c_id};
}

Graph::VarId Graph::concat(const std::vector<VarId>& xs) {
    std::size_t total = 0;
    for (VarId v : xs) {
        total += value(v).numel();
    }
    Tensor out = Tensor::zeros({total});
    std::size_t off = 0;
    for (VarId v : xs) {
        const Tensor& t = value(v);
        for (std::size_t i = 0; i < t.numel(); ++i) {
            out.at(off + i) = t.at(i);
        }
        off += t.numel();
    }
    return push(std::move(out), [xs, self = nodes_.size()](Graph& g) {
        const Tensor& go = g.grad(static_cast<VarId>(self));
        std::size_t off = 0;
        for (VarId v : xs) {
            Tensor& gx = g.grad_mut(v);
            for (std::size_t i = 0; i < gx.numel(); ++i) {
                gx.at(i) += go.at(off + i);
            }
            off += gx.numel();
        }
    });
}

Graph::VarId Graph::sum_all(const std::vector<VarId>& xs, std::size_t dim) {
    if (xs.empty()) {
        return constant(Tensor::zeros({dim}));
    }
    Tensor out = Tensor::zeros({dim});
    for (VarId v : xs) {
        require_shape(value(v), dim, "sum_all element");
        const Tensor& t = value(v);
        for (std::size_t i = 0; i < dim; ++i) {
            out.at(i) += t.at(i);
        }
    }
    return push(std::move(out), [xs, dim, self = nodes_.size()](Graph& g) {
        const Tensor& go = g.grad(static_cast<VarId>(self));
        for (VarId v : xs) {
            Tensor& gx = g.grad_mut(v);
            for (std::size_t i = 0; i < dim; ++i) {
                gx.at(i) += go.at(i);
            }
        }
    });
}

Graph::VarId Graph::cross_entropy_loss(int label, VarId p) {
    require_shape(value(p), 1, "cross_entropy p");
    const double raw = value(p).at(0);
    const double clamped = std::min(std::max(raw, kCeEps), 1.0 - kCeEps);
    const double loss =
        label == 1 ? -std::log(clamped) : -std::log(1.0 - clamped);
    return push(Tensor::scalar(loss), [label, p, raw, clamped, self = nodes_.size()](Graph& g) {
        const double go = g.grad(static_cast<VarId>(self)).at(0);
        if (raw <= kCeEps || raw >= 1.0 - kCeEps) {
            return; // clamped: locally constant
        }
        const double y = static_cast<double>(label);
        g.grad_mut(p).at(0) += go * (clamped - y) / (clamped * (1.0 - clamped));
    });
}

Graph::VarId Graph::mean_all(const std::vector<VarId>& xs) {
    if (xs.empty()) {
        throw ShapeMismatch("mean_all of nothing");
    }
    double total = 0.0;
    for (VarId v : xs) {
        require_shape(value(v), 1, "mean_all element");
        total += value(v).at(0);
    }
    const double inv = 1.0 / static_cast<double>(xs.size());
    return push(Tensor::scalar(total * inv), [xs, inv, self = nodes_.size()](Graph& g) {
        const double go = g.grad(static_cast<VarId>(self)).at(0);
        for (VarId v : xs) {
            g.grad_mut(v).at(0) += go * inv;
        }
    });
}

void Graph::backward(VarId root) {
    require_shape(value(root), 1, "backward root");
    grad_mut(root).at(0) = 1.0;
    for (std::size_t i = nodes_.size(); i-- > 0;) {
        if (nodes_[i].back) {
            nodes_[i].back(*this);
        }
    }
    for (const auto& [name, vid] : param_nodes_) {
        for (double v : nodes_[vid].grad.data) {
            if (!std::isfinite(v)) {
                throw NonFiniteGradient("non-finite gradient for parameter " + name);
            }
        }
    }
}

} // namespace linkoracle::nn

