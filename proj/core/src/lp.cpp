#include "bco/lp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bco/error.hpp"

namespace bco {

namespace {

enum class VarKind { Shifted, Reflected, Split };

struct VarMap {
    VarKind kind;
    Eigen::Index col;    // first y column
    double offset;       // l (Shifted) or u (Reflected); 0 for Split
};

enum class RowKind { Ub, Eq, Bound };

struct RowInfo {
    RowKind kind;
    Eigen::Index source;  // index in A_ub / A_eq / variable list
    double scale;         // the row was divided by this
    double flip;          // +1 or -1
    Eigen::Index basis0;  // initial basis column (slack or artificial)
};

class Tableau {
  public:
    Tableau(Mat t, std::vector<Eigen::Index> basis, double pivot_tol)
        : t_(std::move(t)), basis_(std::move(basis)), pivot_tol_(pivot_tol) {}

    [[nodiscard]] Eigen::Index rows() const { return t_.rows() - 1; }
    [[nodiscard]] Eigen::Index cols() const { return t_.cols() - 1; }
    [[nodiscard]] double rhs(Eigen::Index r) const { return t_(r, cols()); }
    [[nodiscard]] double at(Eigen::Index r, Eigen::Index c) const { return t_(r, c); }
    [[nodiscard]] double reduced(Eigen::Index c) const { return t_(rows(), c); }
    [[nodiscard]] double objective() const { return -t_(rows(), cols()); }
    [[nodiscard]] Eigen::Index basic(Eigen::Index r) const { return basis_[static_cast<std::size_t>(r)]; }

    void set_costs(const Vec& cost) {
        const auto m = rows();
        t_.row(m).setZero();
        t_.row(m).head(cols()) = cost.transpose();
        for (Eigen::Index r = 0; r < m; ++r) {
            const double cb = cost(basic(r));
            if (cb != 0.0) {
                t_.row(m) -= cb * t_.row(r);
            }
        }
    }

    void pivot(Eigen::Index r, Eigen::Index c) {
        const double p = t_(r, c);
        t_.row(r) /= p;
        for (Eigen::Index i = 0; i < t_.rows(); ++i) {
            if (i == r) {
                continue;
            }
            const double f = t_(i, c);
            if (f != 0.0) {
                t_.row(i) -= f * t_.row(r);
                t_(i, c) = 0.0;
            }
        }
        basis_[static_cast<std::size_t>(r)] = c;
    }

    /// Bland: leaving row by min ratio, ties broken by smallest basic index.
    [[nodiscard]] Eigen::Index ratio_test(Eigen::Index c) const {
        Eigen::Index best = -1;
        double best_ratio = kInf;
        for (Eigen::Index r = 0; r < rows(); ++r) {
            const double a = t_(r, c);
            if (a <= pivot_tol_) {
                continue;
            }
            const double ratio = std::max(0.0, rhs(r)) / a;
            const double tie = 1e-12 * std::max(1.0, std::abs(best_ratio));
            if (best < 0 || ratio < best_ratio - tie ||
                (ratio <= best_ratio + tie && basic(r) < basic(best))) {
                best = r;
                best_ratio = ratio;
            }
        }
        return best;
    }

  private:
    Mat t_;
    std::vector<Eigen::Index> basis_;
    double pivot_tol_;
};

void check_shapes(const LpProblem& p) {
    const auto n = p.num_vars();
    if (p.a_ub.size() > 0 && p.a_ub.cols() != n) {
        throw StructuralError("solve_lp: A_ub column count does not match objective");
    }
    if (p.a_ub.rows() != p.b_ub.size()) {
        throw StructuralError("solve_lp: A_ub row count does not match b_ub");
    }
    if (p.a_eq.size() > 0 && p.a_eq.cols() != n) {
        throw StructuralError("solve_lp: A_eq column count does not match objective");
    }
    if (p.a_eq.rows() != p.b_eq.size()) {
        throw StructuralError("solve_lp: A_eq row count does not match b_eq");
    }
    if ((p.lower.size() != 0 && p.lower.size() != n) ||
        (p.upper.size() != 0 && p.upper.size() != n)) {
        throw StructuralError("solve_lp: bound vector length does not match objective");
    }
    if (!p.objective.allFinite() || !p.b_ub.allFinite() || !p.b_eq.allFinite() ||
        (p.a_ub.size() > 0 && !p.a_ub.allFinite()) || (p.a_eq.size() > 0 && !p.a_eq.allFinite())) {
        throw StructuralError("solve_lp: non-finite problem data");
    }
}

}  // namespace

const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal:
            return "Optimal";
        case LpStatus::Unbounded:
            return "Unbounded";
        case LpStatus::Infeasible:
            return "Infeasible";
    }
    return "?";
}

LpResult solve_lp(const LpProblem& problem, const LpOptions& options) {
    check_shapes(problem);
    const auto n = problem.num_vars();
    const Vec lower = problem.lower.size() ? problem.lower : Vec::Zero(n);
    const Vec upper = problem.upper.size() ? problem.upper : Vec::Constant(n, kInf);
    for (Eigen::Index k = 0; k < n; ++k) {
        if (std::isnan(lower(k)) || std::isnan(upper(k)) || lower(k) > upper(k) ||
            lower(k) == kInf || upper(k) == -kInf) {
            throw StructuralError("solve_lp: inconsistent variable bounds");
        }
    }

    // Map x onto y >= 0.
    std::vector<VarMap> vars;
    Eigen::Index ny = 0;
    std::vector<Eigen::Index> bounded;  // original vars needing a y <= u - l row
    for (Eigen::Index k = 0; k < n; ++k) {
        if (std::isfinite(lower(k))) {
            vars.push_back({VarKind::Shifted, ny++, lower(k)});
            if (std::isfinite(upper(k))) {
                bounded.push_back(k);
            }
        } else if (std::isfinite(upper(k))) {
            vars.push_back({VarKind::Reflected, ny++, upper(k)});
        } else {
            vars.push_back({VarKind::Split, ny, 0.0});
            ny += 2;
        }
    }
    const Vec x_offset = [&] {
        Vec o(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            o(k) = vars[static_cast<std::size_t>(k)].offset;
        }
        return o;
    }();

    auto to_y_row = [&](const auto& a_row) {
        Vec row = Vec::Zero(ny);
        for (Eigen::Index k = 0; k < n; ++k) {
            const auto& v = vars[static_cast<std::size_t>(k)];
            const double a = a_row(k);
            switch (v.kind) {
                case VarKind::Shifted:
                    row(v.col) += a;
                    break;
                case VarKind::Reflected:
                    row(v.col) -= a;
                    break;
                case VarKind::Split:
                    row(v.col) += a;
                    row(v.col + 1) -= a;
                    break;
            }
        }
        return row;
    };

    const Eigen::Index m_ub = problem.a_ub.rows();
    const Eigen::Index m_eq = problem.a_eq.rows();
    const auto m_b = static_cast<Eigen::Index>(bounded.size());
    const Eigen::Index m = m_ub + m_eq + m_b;
    const Eigen::Index n_slack = m_ub + m_b;

    std::vector<Vec> row_coef(static_cast<std::size_t>(m));
    Vec q(m);
    std::vector<RowInfo> info(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m_ub; ++i) {
        row_coef[static_cast<std::size_t>(i)] = to_y_row(problem.a_ub.row(i));
        q(i) = problem.b_ub(i) - problem.a_ub.row(i).dot(x_offset);
        info[static_cast<std::size_t>(i)] = {RowKind::Ub, i, 1.0, 1.0, -1};
    }
    for (Eigen::Index i = 0; i < m_eq; ++i) {
        const auto r = m_ub + i;
        row_coef[static_cast<std::size_t>(r)] = to_y_row(problem.a_eq.row(i));
        q(r) = problem.b_eq(i) - problem.a_eq.row(i).dot(x_offset);
        info[static_cast<std::size_t>(r)] = {RowKind::Eq, i, 1.0, 1.0, -1};
    }
    for (Eigen::Index i = 0; i < m_b; ++i) {
        const auto r = m_ub + m_eq + i;
        const auto k = bounded[static_cast<std::size_t>(i)];
        Vec row = Vec::Zero(ny);
        row(vars[static_cast<std::size_t>(k)].col) = 1.0;
        row_coef[static_cast<std::size_t>(r)] = row;
        q(r) = upper(k) - lower(k);
        info[static_cast<std::size_t>(r)] = {RowKind::Bound, k, 1.0, 1.0, -1};
    }

    // Equilibrate and flip to q >= 0; count artificials.
    Eigen::Index n_art = 0;
    for (Eigen::Index r = 0; r < m; ++r) {
        auto& ri = info[static_cast<std::size_t>(r)];
        auto& coef = row_coef[static_cast<std::size_t>(r)];
        const double s = coef.size() ? coef.cwiseAbs().maxCoeff() : 0.0;
        ri.scale = s > 0.0 ? s : 1.0;
        coef /= ri.scale;
        q(r) /= ri.scale;
        if (q(r) < 0.0) {
            ri.flip = -1.0;
            coef = -coef;
            q(r) = -q(r);
        }
        const bool has_slack = ri.kind != RowKind::Eq;
        if (!(has_slack && ri.flip > 0.0)) {
            ++n_art;
        }
    }

    const Eigen::Index col_slack0 = ny;
    const Eigen::Index col_art0 = ny + n_slack;
    const Eigen::Index n_cols = ny + n_slack + n_art;
    Mat t = Mat::Zero(m + 1, n_cols + 1);
    std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
    {
        Eigen::Index slack = 0;
        Eigen::Index art = 0;
        for (Eigen::Index r = 0; r < m; ++r) {
            auto& ri = info[static_cast<std::size_t>(r)];
            t.row(r).head(ny) = row_coef[static_cast<std::size_t>(r)].transpose();
            t(r, n_cols) = q(r);
            Eigen::Index slack_col = -1;
            if (ri.kind != RowKind::Eq) {
                slack_col = col_slack0 + slack++;
                t(r, slack_col) = ri.flip;
            }
            if (slack_col >= 0 && ri.flip > 0.0) {
                ri.basis0 = slack_col;
            } else {
                ri.basis0 = col_art0 + art++;
                t(r, ri.basis0) = 1.0;
            }
            basis[static_cast<std::size_t>(r)] = ri.basis0;
        }
    }

    Tableau tab(std::move(t), std::move(basis), options.pivot_tol);
    const int cap = options.max_iterations > 0
                        ? options.max_iterations
                        : static_cast<int>(50 * (m + n_cols) + 1000);
    int iterations = 0;

    auto run_phase = [&](Eigen::Index allowed_cols, double cost_scale) -> Eigen::Index {
        const double tol = 1e-9 * std::max(1.0, cost_scale);
        while (true) {
            Eigen::Index enter = -1;
            for (Eigen::Index c = 0; c < allowed_cols; ++c) {
                if (tab.reduced(c) < -tol) {
                    enter = c;
                    break;
                }
            }
            if (enter < 0) {
                return -1;
            }
            const auto leave = tab.ratio_test(enter);
            if (leave < 0) {
                return enter;  // unbounded direction
            }
            if (++iterations > cap) {
                throw NumericalFailure("solve_lp: iteration cap exceeded (" + std::to_string(cap) +
                                       " pivots, " + std::to_string(m) + " rows, " +
                                       std::to_string(n_cols) + " columns)");
            }
            tab.pivot(leave, enter);
        }
    };

    LpResult result;

    // Phase 1.
    if (n_art > 0) {
        Vec cost1 = Vec::Zero(n_cols);
        cost1.tail(n_art).setOnes();
        tab.set_costs(cost1);
        run_phase(n_cols, 1.0);
        // Read off the basic artificials; the objective cell drifts on badly scaled rows.
        double infeas = 0.0;
        for (Eigen::Index r = 0; r < m; ++r) {
            if (tab.basic(r) >= col_art0) {
                infeas += std::max(0.0, tab.rhs(r));
            }
        }
        const double q_scale = std::max(1.0, q.size() ? q.cwiseAbs().maxCoeff() : 0.0);
        if (infeas > options.feasibility_tol * q_scale) {
            result.status = LpStatus::Infeasible;
            result.farkas_ub = Vec::Zero(m_ub);
            result.farkas_eq = Vec::Zero(m_eq);
            for (Eigen::Index r = 0; r < m; ++r) {
                const auto& ri = info[static_cast<std::size_t>(r)];
                const double pi = cost1(ri.basis0) - tab.reduced(ri.basis0);
                const double mult = -pi * ri.flip / ri.scale;
                if (ri.kind == RowKind::Ub) {
                    result.farkas_ub(ri.source) = std::max(0.0, mult);
                } else if (ri.kind == RowKind::Eq) {
                    result.farkas_eq(ri.source) = mult;
                }
            }
            result.iterations = iterations;
            return result;
        }
        // Drive zero-valued artificials out of the basis where possible.
        for (Eigen::Index r = 0; r < m; ++r) {
            if (tab.basic(r) < col_art0) {
                continue;
            }
            for (Eigen::Index c = 0; c < col_art0; ++c) {
                if (std::abs(tab.at(r, c)) > options.pivot_tol) {
                    tab.pivot(r, c);
                    break;
                }
            }
        }
    }

    // Phase 2.
    Vec cost2 = Vec::Zero(n_cols);
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto& v = vars[static_cast<std::size_t>(k)];
        const double c = problem.objective(k);
        switch (v.kind) {
            case VarKind::Shifted:
                cost2(v.col) = c;
                break;
            case VarKind::Reflected:
                cost2(v.col) = -c;
                break;
            case VarKind::Split:
                cost2(v.col) = c;
                cost2(v.col + 1) = -c;
                break;
        }
    }
    tab.set_costs(cost2);
    const double c_scale = problem.objective.size() ? problem.objective.cwiseAbs().maxCoeff() : 0.0;
    const auto unbounded_col = run_phase(col_art0, c_scale);

    auto z_to_x = [&](const Vec& z) {
        Vec x(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            const auto& v = vars[static_cast<std::size_t>(k)];
            switch (v.kind) {
                case VarKind::Shifted:
                    x(k) = v.offset + z(v.col);
                    break;
                case VarKind::Reflected:
                    x(k) = v.offset - z(v.col);
                    break;
                case VarKind::Split:
                    x(k) = z(v.col) - z(v.col + 1);
                    break;
            }
        }
        return x;
    };
    auto z_dir_to_x = [&](const Vec& z) {
        Vec x(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            const auto& v = vars[static_cast<std::size_t>(k)];
            switch (v.kind) {
                case VarKind::Shifted:
                    x(k) = z(v.col);
                    break;
                case VarKind::Reflected:
                    x(k) = -z(v.col);
                    break;
                case VarKind::Split:
                    x(k) = z(v.col) - z(v.col + 1);
                    break;
            }
        }
        return x;
    };

    Vec z = Vec::Zero(n_cols);
    for (Eigen::Index r = 0; r < m; ++r) {
        z(tab.basic(r)) = std::max(0.0, tab.rhs(r));
    }
    result.x = z_to_x(z);
    result.iterations = iterations;

    if (unbounded_col >= 0) {
        Vec dz = Vec::Zero(n_cols);
        dz(unbounded_col) = 1.0;
        for (Eigen::Index r = 0; r < m; ++r) {
            dz(tab.basic(r)) -= tab.at(r, unbounded_col);
        }
        result.status = LpStatus::Unbounded;
        result.ray = z_dir_to_x(dz);
        result.value = -kInf;
        return result;
    }

    result.status = LpStatus::Optimal;
    result.value = problem.objective.dot(result.x);
    result.dual_ub = Vec::Zero(m_ub);
    result.dual_eq = Vec::Zero(m_eq);
    for (Eigen::Index r = 0; r < m; ++r) {
        const auto& ri = info[static_cast<std::size_t>(r)];
        const double pi = cost2(ri.basis0) - tab.reduced(ri.basis0);
        const double mult = -pi * ri.flip / ri.scale;
        if (ri.kind == RowKind::Ub) {
            result.dual_ub(ri.source) = std::max(0.0, mult);
        } else if (ri.kind == RowKind::Eq) {
            result.dual_eq(ri.source) = mult;
        }
    }
    return result;
}

double lp_primal_residual(const LpProblem& problem, const Vec& x) {
    const auto n = problem.num_vars();
    const Vec lower = problem.lower.size() ? problem.lower : Vec::Zero(n);
    const Vec upper = problem.upper.size() ? problem.upper : Vec::Constant(n, kInf);
    double worst = 0.0;
    if (problem.a_ub.rows() > 0) {
        worst = std::max(worst, (problem.a_ub * x - problem.b_ub).maxCoeff());
    }
    if (problem.a_eq.rows() > 0) {
        worst = std::max(worst, (problem.a_eq * x - problem.b_eq).cwiseAbs().maxCoeff());
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        worst = std::max({worst, lower(k) - x(k), x(k) - upper(k)});
    }
    return worst;
}

double farkas_margin(const LpProblem& problem, const Vec& farkas_ub, const Vec& farkas_eq) {
    const auto n = problem.num_vars();
    const Vec lower = problem.lower.size() ? problem.lower : Vec::Zero(n);
    const Vec upper = problem.upper.size() ? problem.upper : Vec::Constant(n, kInf);
    Vec g = Vec::Zero(n);
    double rhs = 0.0;
    if (problem.a_ub.rows() > 0) {
        if ((farkas_ub.array() < 0.0).any()) {
            return -kInf;
        }
        g += problem.a_ub.transpose() * farkas_ub;
        rhs += problem.b_ub.dot(farkas_ub);
    }
    if (problem.a_eq.rows() > 0) {
        g += problem.a_eq.transpose() * farkas_eq;
        rhs += problem.b_eq.dot(farkas_eq);
    }
    const double g_tol = 1e-9 * std::max(1.0, g.size() ? g.cwiseAbs().maxCoeff() : 0.0);
    double box_min = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (g(k) > g_tol) {
            if (!std::isfinite(lower(k))) {
                return -kInf;
            }
            box_min += g(k) * lower(k);
        } else if (g(k) < -g_tol) {
            if (!std::isfinite(upper(k))) {
                return -kInf;
            }
            box_min += g(k) * upper(k);
        }
    }
    return box_min - rhs;
}

}  // namespace bco
