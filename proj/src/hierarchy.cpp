#include "poncelet/hierarchy.hpp"

#include <cmath>

namespace poncelet::hierarchy {

MatrixXd tensor_L(const ConfocalFamily& family, const VectorXd& x) {
    const int d = family.d;
    MatrixXd l = MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) l(i, i) = family.b[i];
    l -= x * x.transpose();
    return l;
}

std::vector<MatrixXd> tensor_L_jacobian(const VectorXd& x) {
    const int d = static_cast<int>(x.size());
    std::vector<MatrixXd> dl(d, MatrixXd::Zero(d, d));
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) {
            dl[j](j, i) -= x[i];
            dl[j](i, j) -= x[i];
        }
    }
    return dl;
}

MatrixXd matrix_int_power(const MatrixXd& l, int m) {
    const int d = static_cast<int>(l.rows());
    if (m == 0) return MatrixXd::Identity(d, d);
    MatrixXd base = l;
    if (m < 0) {
        Eigen::FullPivLU<MatrixXd> lu(l);
        if (!lu.isInvertible())
            throw Error(ErrorCode::SingularL, "L is singular at this point");
        base = lu.inverse();
        m = -m;
    }
    MatrixXd acc = MatrixXd::Identity(d, d);
    for (int i = 0; i < m; ++i) acc = acc * base;
    return acc;
}

namespace {

// d(L^m)/dx_j from dL/dx_j by the product rule; negative m goes through
// d(L^{-1}) = -L^{-1} dL L^{-1}.
std::vector<MatrixXd> power_jacobian(const MatrixXd& l, const std::vector<MatrixXd>& dl,
                                     int m) {
    const int d = static_cast<int>(l.rows());
    std::vector<MatrixXd> out(dl.size(), MatrixXd::Zero(d, d));
    if (m == 0) return out;
    MatrixXd base = l;
    std::vector<MatrixXd> dbase = dl;
    if (m < 0) {
        Eigen::FullPivLU<MatrixXd> lu(l);
        if (!lu.isInvertible())
            throw Error(ErrorCode::SingularL, "L is singular at this point");
        base = lu.inverse();
        for (std::size_t j = 0; j < dl.size(); ++j) dbase[j] = -base * dl[j] * base;
        m = -m;
    }
    // powers of base up to m-1
    std::vector<MatrixXd> pows(m);
    pows[0] = MatrixXd::Identity(d, d);
    for (int i = 1; i < m; ++i) pows[i] = pows[i - 1] * base;
    for (std::size_t j = 0; j < dl.size(); ++j)
        for (int i = 0; i < m; ++i)
            out[j] += pows[i] * dbase[j] * pows[m - 1 - i];
    return out;
}

}  // namespace

STensors char_tensors(const ConfocalFamily& family, const VectorXd& x) {
    const int d = family.d;
    MatrixXd l = tensor_L(family, x);
    STensors st;
    st.S.assign(d, MatrixXd());
    st.elementary.assign(d, 0.0);
    MatrixXd a = MatrixXd::Identity(d, d);
    st.S[d - 1] = a;
    for (int m = 1; m < d; ++m) {
        MatrixXd la = l * a;
        double em = la.trace() / m;
        st.elementary[m - 1] = em;
        a = em * MatrixXd::Identity(d, d) - la;
        st.S[d - 1 - m] = a;
    }
    st.elementary[d - 1] = (l * a).trace() / d;  // = det L
    return st;
}

STensorsExact char_tensors_exact(const std::vector<Rational>& b,
                                 const std::vector<Rational>& x) {
    const int d = static_cast<int>(b.size());
    auto identity = [d]() {
        QMatrix m(d, QVector(d, Rational(0)));
        for (int i = 0; i < d; ++i) m[i][i] = 1;
        return m;
    };
    auto mul = [d](const QMatrix& p, const QMatrix& q) {
        QMatrix r(d, QVector(d, Rational(0)));
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k)
                for (int j = 0; j < d; ++j) r[i][j] += p[i][k] * q[k][j];
        return r;
    };
    QMatrix l(d, QVector(d, Rational(0)));
    for (int i = 0; i < d; ++i) {
        l[i][i] = b[i];
        for (int j = 0; j < d; ++j) l[i][j] -= x[i] * x[j];
    }
    STensorsExact st;
    st.S.assign(d, QMatrix());
    st.elementary.assign(d, Rational(0));
    QMatrix a = identity();
    st.S[d - 1] = a;
    for (int m = 1; m < d; ++m) {
        QMatrix la = mul(l, a);
        Rational tr(0);
        for (int i = 0; i < d; ++i) tr += la[i][i];
        Rational em = tr / m;
        st.elementary[m - 1] = em;
        a = identity();
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) a[i][j] = (i == j ? em : Rational(0)) - la[i][j];
        st.S[d - 1 - m] = a;
    }
    QMatrix la = mul(l, a);
    Rational tr(0);
    for (int i = 0; i < d; ++i) tr += la[i][i];
    st.elementary[d - 1] = tr / d;
    return st;
}

MatrixXd closed_form_adjugate_at(const ConfocalFamily& family, const VectorXd& x,
                                 double alpha) {
    const int d = family.d;
    double det_ba = 1.0;
    VectorXd w(d);
    for (int i = 0; i < d; ++i) {
        double bai = family.b[i] + alpha;
        det_ba *= bai;
        w[i] = x[i] / bai;
    }
    double q = 1.0 - w.dot(x);
    MatrixXd m = MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) m(i, i) = q / (family.b[i] + alpha);
    m += w * w.transpose();
    return det_ba * m;
}

MatrixXd metric_at(const HierarchyContext& ctx, const VectorXd& x, Branch which) {
    MatrixXd l = tensor_L(ctx.family, x);
    if (which == Branch::euclidean) {
        MatrixXd g = matrix_int_power(l, ctx.k);
        return 0.5 * (g + g.transpose());
    }
    double f = confocal::model_gauge(ctx.family, x);
    if (!(f > 0))
        throw Error(ErrorCode::OutsideModel, "hyperbolic metric needs x inside Lambda");
    double det_b = 1.0;
    for (double bi : ctx.family.b) det_b *= bi;
    // Pi L^k = L^{k-1} / (det B f): Pi = L^{-1}/(det B f)
    MatrixXd g = matrix_int_power(l, ctx.k - 1) / (det_b * f);
    return 0.5 * (g + g.transpose());
}

double integral_J(const HierarchyContext& ctx, const VectorXd& x, const VectorXd& p,
                  int i) {
    QuadraticIntegral ji(ctx, i);
    return ji.value(x, p);
}

MatrixXd QuadraticIntegral::quadratic_form(const VectorXd& x) const {
    STensors st = char_tensors(ctx_.family, x);
    MatrixXd l = tensor_L(ctx_.family, x);
    MatrixXd m = st.S[i_] * matrix_int_power(l, -ctx_.k);
    return 0.5 * (m + m.transpose());
}

double QuadraticIntegral::value(const VectorXd& x, const VectorXd& p) const {
    return p.dot(quadratic_form(x) * p);
}

VectorXd QuadraticIntegral::grad_p(const VectorXd& x, const VectorXd& p) const {
    return 2.0 * (quadratic_form(x) * p);
}

VectorXd QuadraticIntegral::grad_x(const VectorXd& x, const VectorXd& p) const {
    const int d = ctx_.family.d;
    MatrixXd l = tensor_L(ctx_.family, x);
    auto dl = tensor_L_jacobian(x);

    // differentiated Faddeev-LeVerrier recursion
    MatrixXd a = MatrixXd::Identity(d, d);
    std::vector<MatrixXd> da(d, MatrixXd::Zero(d, d));
    MatrixXd s_i = (i_ == d - 1) ? a : MatrixXd();
    std::vector<MatrixXd> ds_i(d, MatrixXd::Zero(d, d));
    if (i_ == d - 1) s_i = a;
    for (int m = 1; m < d; ++m) {
        MatrixXd la = l * a;
        double em = la.trace() / m;
        std::vector<MatrixXd> dla(d);
        VectorXd dem(d);
        for (int j = 0; j < d; ++j) {
            dla[j] = dl[j] * a + l * da[j];
            dem[j] = dla[j].trace() / m;
        }
        a = em * MatrixXd::Identity(d, d) - la;
        for (int j = 0; j < d; ++j)
            da[j] = dem[j] * MatrixXd::Identity(d, d) - dla[j];
        if (d - 1 - m == i_) {
            s_i = a;
            ds_i = da;
        }
    }

    MatrixXd lk = matrix_int_power(l, -ctx_.k);
    auto dlk = power_jacobian(l, dl, -ctx_.k);
    VectorXd g(d);
    for (int j = 0; j < d; ++j) {
        MatrixXd dm = ds_i[j] * lk + s_i * dlk[j];
        g[j] = p.dot(dm * p);
    }
    return g;
}

double poisson_bracket(const PhaseFunction& f, const PhaseFunction& g,
                       const VectorXd& x, const VectorXd& p) {
    return f.grad_x(x, p).dot(g.grad_p(x, p)) - f.grad_p(x, p).dot(g.grad_x(x, p));
}

double poisson_bracket_fd(const PhaseFunction& f, const PhaseFunction& g,
                          const VectorXd& x, const VectorXd& p, double h) {
    const int d = static_cast<int>(x.size());
    auto dx = [&](const PhaseFunction& fn, int j) {
        VectorXd xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        return (fn.value(xp, p) - fn.value(xm, p)) / (2 * h);
    };
    auto dp = [&](const PhaseFunction& fn, int j) {
        VectorXd pp = p, pm = p;
        pp[j] += h;
        pm[j] -= h;
        return (fn.value(x, pp) - fn.value(x, pm)) / (2 * h);
    };
    double acc = 0;
    for (int j = 0; j < d; ++j) acc += dx(f, j) * dp(g, j) - dp(f, j) * dx(g, j);
    return acc;
}

namespace {

class EuclideanHierarchyMetric : public MetricEvaluator {
public:
    EuclideanHierarchyMetric(ConfocalFamily family, int k)
        : family_(std::move(family)), k_(k) {}

    int dim() const override { return family_.d; }
    std::string tag() const override { return "g_" + std::to_string(k_); }
    bool flat() const override { return k_ == 0; }
    bool in_domain(const VectorXd& x) const override {
        return k_ == 0 || confocal::model_gauge(family_, x) > 1e-12;
    }
    MatrixXd metric(const VectorXd& x) const override {
        guard(x);
        return metric_at({family_, k_}, x, Branch::euclidean);
    }
    MatrixXd inverse_metric(const VectorXd& x) const override {
        guard(x);
        MatrixXd m = matrix_int_power(tensor_L(family_, x), -k_);
        return 0.5 * (m + m.transpose());
    }
    std::vector<MatrixXd> inverse_metric_jacobian(const VectorXd& x) const override {
        guard(x);
        MatrixXd l = tensor_L(family_, x);
        return power_jacobian(l, tensor_L_jacobian(x), -k_);
    }

private:
    void guard(const VectorXd& x) const {
        // L degenerates on Lambda; g_k is a metric only inside
        if (!in_domain(x))
            throw Error(ErrorCode::LeftModel, "g_k is only Riemannian inside Lambda");
    }

    ConfocalFamily family_;
    int k_;
};

class HyperbolicHierarchyMetric : public MetricEvaluator {
public:
    HyperbolicHierarchyMetric(ConfocalFamily family, int k)
        : family_(std::move(family)), k_(k) {
        det_b_ = 1.0;
        for (double bi : family_.b) det_b_ *= bi;
    }

    int dim() const override { return family_.d; }
    std::string tag() const override { return "gbar_" + std::to_string(k_); }
    bool in_domain(const VectorXd& x) const override {
        return confocal::model_gauge(family_, x) > 0;
    }
    MatrixXd metric(const VectorXd& x) const override {
        return metric_at({family_, k_}, x, Branch::hyperbolic);
    }
    MatrixXd inverse_metric(const VectorXd& x) const override {
        double f = gauge_or_throw(x);
        MatrixXd m = det_b_ * f * matrix_int_power(tensor_L(family_, x), 1 - k_);
        return 0.5 * (m + m.transpose());
    }
    std::vector<MatrixXd> inverse_metric_jacobian(const VectorXd& x) const override {
        double f = gauge_or_throw(x);
        MatrixXd l = tensor_L(family_, x);
        auto dl = tensor_L_jacobian(x);
        MatrixXd lp = matrix_int_power(l, 1 - k_);
        auto dlp = power_jacobian(l, dl, 1 - k_);
        std::vector<MatrixXd> out(family_.d);
        for (int j = 0; j < family_.d; ++j) {
            double df = -2.0 * x[j] / family_.b[j];
            out[j] = det_b_ * (df * lp + f * dlp[j]);
        }
        return out;
    }

private:
    double gauge_or_throw(const VectorXd& x) const {
        double f = confocal::model_gauge(family_, x);
        if (!(f > 0))
            throw Error(ErrorCode::LeftModel, "trajectory left the Klein model");
        return f;
    }

    ConfocalFamily family_;
    int k_;
    double det_b_;
};

class MaupertuisMetric : public MetricEvaluator {
public:
    MaupertuisMetric(std::shared_ptr<MetricEvaluator> base,
                     std::shared_ptr<PotentialEvaluator> v, double h)
        : base_(std::move(base)), v_(std::move(v)), h_(h) {}

    int dim() const override { return base_->dim(); }
    std::string tag() const override {
        return "(h-" + v_->tag() + ")*" + base_->tag();
    }
    bool in_domain(const VectorXd& x) const override {
        return base_->in_domain(x) && h_ > v_->value(x);
    }
    MatrixXd metric(const VectorXd& x) const override {
        return factor(x) * base_->metric(x);
    }
    MatrixXd inverse_metric(const VectorXd& x) const override {
        return base_->inverse_metric(x) / factor(x);
    }
    std::vector<MatrixXd> inverse_metric_jacobian(const VectorXd& x) const override {
        double w = factor(x);
        VectorXd dv = v_->gradient(x);
        MatrixXd ginv = base_->inverse_metric(x);
        auto dginv = base_->inverse_metric_jacobian(x);
        std::vector<MatrixXd> out(dim());
        for (int j = 0; j < dim(); ++j)
            out[j] = dginv[j] / w + ginv * (dv[j] / (w * w));
        return out;
    }

private:
    double factor(const VectorXd& x) const {
        double w = h_ - v_->value(x);
        if (!(w > 0))
            throw Error(ErrorCode::EnergyBelowPotential,
                        "Maupertuis factor h - V(x) is not positive");
        return w;
    }

    std::shared_ptr<MetricEvaluator> base_;
    std::shared_ptr<PotentialEvaluator> v_;
    double h_;
};

}  // namespace

std::shared_ptr<MetricEvaluator> make_hierarchy_metric(const ConfocalFamily& family,
                                                       int k, Branch which) {
    if (which == Branch::euclidean)
        return std::make_shared<EuclideanHierarchyMetric>(family, k);
    return std::make_shared<HyperbolicHierarchyMetric>(family, k);
}

std::shared_ptr<MetricEvaluator> maupertuis_scale(std::shared_ptr<MetricEvaluator> base,
                                                  std::shared_ptr<PotentialEvaluator> v,
                                                  double h) {
    return std::make_shared<MaupertuisMetric>(std::move(base), std::move(v), h);
}

}  // namespace poncelet::hierarchy
