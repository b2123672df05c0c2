#include "mac3/multigrid.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <string>

#include "mac3/errors.hpp"

namespace mac3 {

std::string_view to_string(CycleType c) {
    return c == CycleType::TwoGrid ? "two-grid" : "V";
}

CycleType parse_cycle(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (s == "two-grid" || s == "twogrid" || s == "tg") return CycleType::TwoGrid;
    if (s == "v" || s == "v-cycle" || s == "vcycle") return CycleType::V;
    throw ConfigError("unknown cycle type '" + std::string(name) + "' (expected two-grid or V)");
}

namespace {

constexpr FieldKind kFields[] = {FieldKind::U, FieldKind::V, FieldKind::P};

// Fine index nested under coarse index I along one axis.
int nested(FieldKind k, int axis, int I) {
    const bool on_edge = (k == FieldKind::U && axis == 0) || (k == FieldKind::V && axis == 1);
    return on_edge ? 3 * I : 3 * I + 1;
}

struct Target {
    bool valid = false;
    int i = 0, j = 0;
    double sign = 1.0;
};

// Maps (i, j) of field k onto a stored unknown, applying the boundary closure.
Target resolve(const StaggeredState& s, FieldKind k, int i, int j, Ghost closure) {
    const int n = s.n();
    if (s.bc() == BoundaryMode::Periodic) {
        return {true, ((i % n) + n) % n, ((j % n) + n) % n, 1.0};
    }
    if (k == FieldKind::U && (i <= 0 || i >= n)) return {};
    if (k == FieldKind::V && (j <= 0 || j >= n)) return {};
    int flips = 0;
    auto mirror = [&flips, n](int& x) {
        while (x < 0 || x > n - 1) {
            x = x < 0 ? -1 - x : 2 * n - 1 - x;
            ++flips;
        }
    };
    if (k != FieldKind::U) mirror(i);
    if (k != FieldKind::V) mirror(j);
    if (flips == 0) return {true, i, j, 1.0};
    switch (closure) {
        case Ghost::Zero: return {};
        case Ghost::Even: return {true, i, j, 1.0};
        case Ghost::Odd: return {true, i, j, flips % 2 == 0 ? 1.0 : -1.0};
    }
    return {};
}

}  // namespace

StaggeredState restrict_state(const StaggeredState& fine, Restriction r, TransferClosure closure) {
    if (fine.n() < 9) throw ConfigError("cannot restrict below a 3x3 grid");
    StaggeredState coarse(fine.n() / 3, fine.bc());
    const Stencil st = TransferPair{r}.restriction_stencil();
    for (FieldKind k : kFields) {
        const FieldLayout& l = coarse.layout(k);
        for (int J = l.j0; J < l.j0 + l.ny; ++J) {
            for (int I = l.i0; I < l.i0 + l.nx; ++I) {
                const int fi = nested(k, 0, I);
                const int fj = nested(k, 1, J);
                double acc = 0.0;
                for (const auto& [off, w] : st.entries()) {
                    const Target t = resolve(fine, k, fi + off.k1, fj + off.k2, closure.of(k));
                    if (t.valid) acc += w * t.sign * fine(k, t.i, t.j);
                }
                coarse(k, I, J) = acc;
            }
        }
    }
    return coarse;
}

StaggeredState prolong_state(const StaggeredState& coarse, TransferClosure closure) {
    StaggeredState fine(coarse.n() * 3, coarse.bc());
    const Stencil st = stencils::p25();
    for (FieldKind k : kFields) {
        const FieldLayout& l = coarse.layout(k);
        for (int J = l.j0; J < l.j0 + l.ny; ++J) {
            for (int I = l.i0; I < l.i0 + l.nx; ++I) {
                const double c = coarse(k, I, J);
                if (c == 0.0) continue;
                const int fi = nested(k, 0, I);
                const int fj = nested(k, 1, J);
                for (const auto& [off, w] : st.entries()) {
                    const Target t = resolve(fine, k, fi + off.k1, fj + off.k2, closure.of(k));
                    if (t.valid) fine(k, t.i, t.j) += w * t.sign * c;
                }
            }
        }
    }
    return fine;
}

namespace {

std::vector<FieldKind> gauge_fields(BoundaryMode bc) {
    if (bc == BoundaryMode::Dirichlet) return {FieldKind::P};
    return {FieldKind::U, FieldKind::V, FieldKind::P};
}

}  // namespace

CoarseSolver::CoarseSolver(const SaddleSystem& sys) : n_(sys.n()), bc_(sys.bc()) {
    const Eigen::SparseMatrix<double> L = assemble(
        [&sys](const StaggeredState& x, StaggeredState& out) { sys.apply(x, out); }, n_, bc_);
    const StaggeredState shape = sys.make_state();
    size_ = shape.size();
    const auto fields = gauge_fields(bc_);
    constraints_ = static_cast<int>(fields.size());

    std::vector<Eigen::Triplet<double>> trips;
    for (int c = 0; c < L.outerSize(); ++c) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(L, c); it; ++it) {
            trips.emplace_back(it.row(), it.col(), it.value());
        }
    }
    for (int f = 0; f < constraints_; ++f) {
        const FieldLayout& l = shape.layout(fields[static_cast<std::size_t>(f)]);
        for (int i = l.offset; i < l.offset + l.size(); ++i) {
            trips.emplace_back(i, size_ + f, 1.0);
            trips.emplace_back(size_ + f, i, 1.0);
        }
    }
    Eigen::SparseMatrix<double> bordered(size_ + constraints_, size_ + constraints_);
    bordered.setFromTriplets(trips.begin(), trips.end());
    lu_ = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    lu_->compute(bordered);
    if (lu_->info() != Eigen::Success) {
        throw NumericalError("coarse-grid factorization failed at n = " + std::to_string(n_));
    }
}

StaggeredState CoarseSolver::solve(const StaggeredState& b) const {
    Eigen::VectorXd ext = Eigen::VectorXd::Zero(size_ + constraints_);
    ext.head(size_) = b.data();
    const Eigen::VectorXd sol = lu_->solve(ext);
    if (lu_->info() != Eigen::Success) throw NumericalError("coarse-grid solve failed");
    StaggeredState x(n_, bc_);
    x.data() = sol.head(size_);
    return x;
}

GridHierarchy::GridHierarchy(int n, BoundaryMode bc, const RelaxParams& p, Restriction r,
                             CycleType cycle, DirichletClosure closure)
    : bc_(bc), params_(p), restriction_(r), cycle_(cycle), closure_(closure) {
    if (!valid_grid_size(n) || n < 9) {
        throw ConfigError("multigrid needs n = 3^k with n >= 9, got " + std::to_string(n));
    }
    params_.validate();
    for (int m = n; m >= 3; m /= 3) {
        Level lvl;
        lvl.system = std::make_unique<SaddleSystem>(m, bc, closure);
        if (m > 3) lvl.smoother = std::make_unique<Smoother>(*lvl.system, params_);
        levels_.push_back(std::move(lvl));
    }
    const std::size_t exact = cycle == CycleType::TwoGrid ? 1 : levels_.size() - 1;
    levels_[exact].solver = std::make_unique<CoarseSolver>(*levels_[exact].system);
}

namespace {

void smooth(const Level& lvl, StaggeredState& x, const StaggeredState& b, int sweeps) {
    for (int s = 0; s < sweeps; ++s) lvl.smoother->sweep(x, b);
}

}  // namespace

void two_grid_cycle(const GridHierarchy& hier, StaggeredState& x, const StaggeredState& b,
                    int nu1, int nu2) {
    const Level& fine = hier.level(0);
    const Level& coarse = hier.level(1);
    if (!coarse.solver) throw ConfigError("hierarchy was not built for two-grid cycles");
    const TransferClosure g = hier.closure().transfer;

    smooth(fine, x, b, nu1);
    const StaggeredState rc = restrict_state(fine.system->residual(x, b), hier.restriction(), g);
    x.data() += prolong_state(coarse.solver->solve(rc), g).data();
    smooth(fine, x, b, nu2);
}

void v_cycle(const GridHierarchy& hier, StaggeredState& x, const StaggeredState& b, int nu1,
             int nu2, int level) {
    const Level& lvl = hier.level(level);
    if (level == hier.levels() - 1) {
        if (!lvl.solver) throw ConfigError("hierarchy was not built for V-cycles");
        x.data() += lvl.solver->solve(lvl.system->residual(x, b)).data();
        return;
    }
    const TransferClosure g = hier.closure().transfer;
    smooth(lvl, x, b, nu1);
    const StaggeredState rc = restrict_state(lvl.system->residual(x, b), hier.restriction(), g);
    StaggeredState ec(rc.n(), rc.bc());
    v_cycle(hier, ec, rc, nu1, nu2, level + 1);
    x.data() += prolong_state(ec, g).data();
    smooth(lvl, x, b, nu2);
}

void cycle(const GridHierarchy& hier, StaggeredState& x, const StaggeredState& b, int nu1,
           int nu2) {
    if (hier.cycle() == CycleType::TwoGrid) {
        two_grid_cycle(hier, x, b, nu1, nu2);
    } else {
        v_cycle(hier, x, b, nu1, nu2);
    }
}

ConvergenceReport solve(const GridHierarchy& hier, const SolveOptions& opts) {
    if (opts.nu1 < 0 || opts.nu2 < 0 || opts.max_iters < 1) {
        throw ConfigError("sweep counts must be >= 0 and max_iters >= 1");
    }
    const SaddleSystem& sys = *hier.level(0).system;
    StaggeredState x = sys.make_state();
    const StaggeredState b = sys.make_state();

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (Eigen::Index i = 0; i < x.data().size(); ++i) x.data()[i] = dist(rng);
    x.project_gauge();

    ConvergenceReport rep;
    const double r0 = norm(sys.residual(x, b));
    rep.residual_norms.push_back(r0);
    double rk = r0;
    for (int k = 1; k <= opts.max_iters; ++k) {
        cycle(hier, x, b, opts.nu1, opts.nu2);
        x.project_gauge();
        rk = norm(sys.residual(x, b));
        rep.residual_norms.push_back(rk);
        rep.iterations = k;
        if (!std::isfinite(rk) || rk > opts.divergence_factor * r0) {
            rep.diverged = true;
            break;
        }
        if (rk <= opts.tolerance) {
            rep.converged = true;
            break;
        }
    }
    rep.rho = std::pow(rk / r0, 1.0 / rep.iterations);
    return rep;
}

double asymptotic_rate(const GridHierarchy& hier, int nu1, int nu2, int warmup, int window,
                       std::uint64_t seed) {
    if (nu1 < 0 || nu2 < 0 || warmup < 0 || window < 1) {
        throw ConfigError("asymptotic_rate needs nu >= 0, warmup >= 0 and window >= 1");
    }
    const SaddleSystem& sys = *hier.level(0).system;
    StaggeredState x = sys.make_state();
    const StaggeredState b = sys.make_state();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (Eigen::Index i = 0; i < x.data().size(); ++i) x.data()[i] = dist(rng);
    x.project_gauge();

    double log_sum = 0.0;
    double before = norm(sys.residual(x, b));
    for (int k = 1; k <= warmup + window; ++k) {
        x.data() /= before;
        cycle(hier, x, b, nu1, nu2);
        x.project_gauge();
        const double after = norm(sys.residual(x, b));
        if (!std::isfinite(after)) throw NumericalError("asymptotic_rate: non-finite residual");
        if (after == 0.0) return 0.0;
        if (k > warmup) log_sum += std::log(after);
        before = after;
    }
    return std::exp(log_sum / window);
}

Eigen::MatrixXd assemble_two_grid_matrix(const GridHierarchy& hier, int nu1, int nu2) {
    const SaddleSystem& sys = *hier.level(0).system;
    if (sys.n() > 9) throw ConfigError("assemble_two_grid_matrix is limited to n <= 9");
    StaggeredState x = sys.make_state();
    const StaggeredState b = sys.make_state();
    const int size = x.size();
    Eigen::MatrixXd E(size, size);
    for (int c = 0; c < size; ++c) {
        x.set_zero();
        x.data()[c] = 1.0;
        cycle(hier, x, b, nu1, nu2);
        E.col(c) = x.data();
    }
    return E;
}

Eigen::MatrixXd gauge_complement_projector(int n, BoundaryMode bc) {
    const StaggeredState shape(n, bc);
    Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(shape.size(), shape.size());
    for (FieldKind k : gauge_fields(bc)) {
        const FieldLayout& l = shape.layout(k);
        proj.block(l.offset, l.offset, l.size(), l.size()).array() -= 1.0 / l.size();
    }
    return proj;
}

}  // namespace mac3
