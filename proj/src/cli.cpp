#include "mrl/cli.hpp"

#include "mrl/errors.hpp"
#include "mrl/expansion.hpp"
#include "mrl/models.hpp"
#include "mrl/mrl.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace mrl::cli {

namespace {

constexpr const char* kNa = "NA";

// CSV cells carry 17 significant digits so emitted values parse back
// to the identical double.
std::string format_full(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string format_human(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void emit_csv(std::ostream& out) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            out << (i ? "," : "") << header[i];
        }
        out << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                out << (i ? "," : "") << row[i];
            }
            out << '\n';
        }
    }

    void emit_aligned(std::ostream& out) const {
        std::vector<std::size_t> width(header.size(), 0);
        for (std::size_t i = 0; i < header.size(); ++i) {
            width[i] = header[i].size();
        }
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                width[i] = std::max(width[i], row[i].size());
            }
        }
        auto emit_row = [&](const std::vector<std::string>& row) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out << "  ";
                out << std::string(width[i] - row[i].size(), ' ') << row[i];
            }
            out << '\n';
        };
        emit_row(header);
        for (const auto& row : rows) {
            emit_row(row);
        }
    }
};

struct GridOptions {
    std::string t_list;
    double t_start = std::numeric_limits<double>::quiet_NaN();
    double t_end = std::numeric_limits<double>::quiet_NaN();
    int t_steps = 0;
};

struct Request {
    std::string model_text;
    GridOptions grid;
    std::string method = "quadrature";
    int order = 6;
    std::string orders_list;
    double rel_tol = 1e-8;
    std::string format = "csv";
    double eps = 2.0 / 3.0;
    int n = 5;
};

class UsageError : public std::runtime_error {
  public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

std::vector<double> parse_double_list(const std::string& text, const char* flag) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string item = text.substr(pos, comma - pos);
        const char* begin = item.c_str();
        char* end = nullptr;
        const double value = std::strtod(begin, &end);
        while (end && *end == ' ') ++end;
        if (end == begin || (end && *end != '\0')) {
            throw UsageError(std::string(flag) + ": cannot parse '" + item + "' as a number");
        }
        values.push_back(value);
        pos = comma + 1;
        if (comma == text.size()) break;
    }
    if (values.empty()) {
        throw UsageError(std::string(flag) + ": empty list");
    }
    return values;
}

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
    std::vector<int> values;
    for (double v : parse_double_list(text, flag)) {
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v || i < 1) {
            throw UsageError(std::string(flag) + ": entries must be positive integers");
        }
        values.push_back(i);
    }
    return values;
}

std::vector<double> build_grid(const GridOptions& grid) {
    const bool has_list = !grid.t_list.empty();
    const bool has_range = grid.t_steps > 0 || !std::isnan(grid.t_start) || !std::isnan(grid.t_end);
    if (has_list && has_range) {
        throw UsageError("give either --t or --t-start/--t-end/--t-steps, not both");
    }
    if (has_list) {
        return parse_double_list(grid.t_list, "--t");
    }
    if (!has_range) {
        throw UsageError("a t grid is required (--t or --t-start/--t-end/--t-steps)");
    }
    if (std::isnan(grid.t_start) || std::isnan(grid.t_end) || grid.t_steps < 1) {
        throw UsageError("--t-start, --t-end and --t-steps (>= 1) must be given together");
    }
    if (grid.t_steps == 1) {
        return {grid.t_start};
    }
    if (!(grid.t_end > grid.t_start)) {
        throw UsageError("--t-end must exceed --t-start");
    }
    std::vector<double> values(grid.t_steps);
    const double h = (grid.t_end - grid.t_start) / (grid.t_steps - 1);
    for (int i = 0; i < grid.t_steps; ++i) {
        values[i] = grid.t_start + h * i;
    }
    values.back() = grid.t_end;  // inclusive ends, exactly
    return values;
}

// Argument-time support validation so no grid point can surface later
// as a mid-run numeric fault.
void validate_grid(const HazardModel& model, const std::vector<double>& grid) {
    for (double t : grid) {
        if (std::isnan(t) || !model.support().contains(t)) {
            throw UsageError("t = " + format_human(t) + " outside the support of " +
                             family_name(model.family()));
        }
        if (model.family() == Family::beta1 && 1.0 - t <= 1e-12) {
            throw UsageError("t = " + format_human(t) +
                             " within 1e-12 of the beta1 right endpoint");
        }
    }
}

bool model_has_closed_form(const HazardModel& model) {
    if (model.family() == Family::exponential) return true;
    if (!model.has_family_data()) return false;
    if (model.family() == Family::beta2) {
        return model.spec().param("alpha") > 1.0;
    }
    return true;
}

bool model_has_expansion(const HazardModel& model) {
    return model.family() == Family::linear || model.family() == Family::chen;
}

void emit(const Table& table, const Request& req, std::ostream& out) {
    if (req.format == "table") {
        table.emit_aligned(out);
    } else {
        table.emit_csv(out);
    }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_eval(const Request& req, const HazardModel& model, const std::vector<double>& grid,
             std::ostream& out) {
    if (req.method == "closed" && !model_has_closed_form(model)) {
        throw UsageError(std::string("method 'closed' is not available for ") +
                         family_name(model.family()));
    }
    if (req.method == "expansion") {
        if (!model_has_expansion(model)) {
            throw UsageError(std::string("method 'expansion' is not available for ") +
                             family_name(model.family()) +
                             " (no analytic hazard derivatives)");
        }
        if (req.order < 1) {
            throw UsageError("--order must be >= 1");
        }
    }

    Table table;
    table.header = {"t", "m", "abs_err"};
    for (double t : grid) {
        std::vector<std::string> row;
        row.push_back(format_full(t));
        if (req.method == "quadrature") {
            const QuadratureResult qr = mrl_quadrature(model, t, req.rel_tol);
            row.push_back(format_full(qr.value));
            row.push_back(format_full(qr.abs_err_est));
        } else if (req.method == "closed") {
            row.push_back(format_full(mrl_closed_family(model, t)));
            row.push_back(kNa);
        } else {
            row.push_back(format_full(expansion::mrl_expansion(model, t, req.order)));
            row.push_back(kNa);
        }
        table.rows.push_back(std::move(row));
    }
    emit(table, req, out);
    return 0;
}

int cmd_compare(const Request& req, const HazardModel& model, const std::vector<double>& grid,
                std::ostream& out) {
    std::vector<int> orders = {2, 4, 6};
    if (!req.orders_list.empty()) {
        orders = parse_int_list(req.orders_list, "--orders");
    }

    Table table;
    table.header = {"t", "method", "order", "value", "abs_err", "rel_err"};
    int usable_rows = 0;
    int failed_rows = 0;

    for (double t : grid) {
        double reference = std::numeric_limits<double>::quiet_NaN();
        {
            std::vector<std::string> row = {format_full(t), "quadrature", kNa, kNa, kNa, kNa};
            try {
                reference = mrl_quadrature(model, t, req.rel_tol).value;
                row[3] = format_full(reference);
                row[4] = format_full(0.0);
                row[5] = format_full(0.0);
                ++usable_rows;
            } catch (const std::exception&) {
                ++failed_rows;
            }
            table.rows.push_back(std::move(row));
        }

        auto push_method = [&](const char* name, const std::string& order_cell, auto compute) {
            std::vector<std::string> row = {format_full(t), name, order_cell, kNa, kNa, kNa};
            try {
                const double value = compute();
                row[3] = format_full(value);
                if (!std::isnan(reference)) {
                    const double abs_err = std::fabs(value - reference);
                    row[4] = format_full(abs_err);
                    row[5] = format_full(abs_err / std::fabs(reference));
                }
                ++usable_rows;
            } catch (const std::exception&) {
                ++failed_rows;
            }
            table.rows.push_back(std::move(row));
        };

        push_method("closed", kNa, [&] { return mrl_closed_family(model, t); });
        for (int order : orders) {
            push_method("expansion", std::to_string(order),
                        [&] { return expansion::mrl_expansion(model, t, order); });
        }
    }

    if (usable_rows == 0 && failed_rows > 0) {
        throw EvaluationError("compare: every row failed");
    }
    emit(table, req, out);
    return 0;
}

int cmd_coeffs(const Request& req, const HazardModel& model, const std::vector<double>& grid,
               std::ostream& out) {
    if (!model_has_expansion(model)) {
        throw UsageError(std::string("coeffs: ") + family_name(model.family()) +
                         " has no analytic hazard derivatives");
    }
    if (req.order < 1) throw UsageError("--order must be >= 1");

    Table table;
    table.header = {"t", "k", "b"};
    for (double t : grid) {
        std::vector<double> derivs;
        for (int j = 2; j <= req.order - 2; ++j) {
            derivs.push_back(model.hazard_derivative(j, t));
        }
        expansion::ExpansionCoefficients coeffs =
            expansion::coeffs_recurrence(derivs, req.order - 1);
        coeffs.t = t;
        for (int k = 0; k <= coeffs.kmax; ++k) {
            table.rows.push_back({format_full(t), std::to_string(k), format_full(coeffs.b[k])});
        }
    }
    emit(table, req, out);
    return 0;
}

int cmd_phik(const Request& req, const HazardModel& model, const std::vector<double>& grid,
             std::ostream& out) {
    if (req.order < 1) throw UsageError("--order must be >= 1");

    Table table;
    table.header = {"t", "k", "phi", "method", "abs_err"};
    for (double t : grid) {
        const double r = model.hazard(t);
        const double r_prime = model_has_expansion(model)
                                   ? model.hazard_derivative(1, t)
                                   : std::numeric_limits<double>::quiet_NaN();
        if (!(r_prime > 0.0)) {
            throw EvaluationError("phik: requires a model with r'(t) > 0 at every grid point");
        }
        expansion::PhiSequence seq = expansion::phi_best(r, r_prime, req.order - 1);
        seq.t = t;
        for (int k = 0; k <= seq.kmax; ++k) {
            table.rows.push_back({format_full(t), std::to_string(k), format_full(seq.phi[k]),
                                  expansion::phi_method_name(seq.method[k]),
                                  format_full(seq.abs_err_est[k])});
        }
    }
    emit(table, req, out);
    return 0;
}

int cmd_check(const Request& req, const HazardModel& model, const std::vector<double>& grid,
              std::ostream& out) {
    if (!model_has_expansion(model)) {
        throw UsageError(std::string("check: ") + family_name(model.family()) +
                         " has no analytic hazard derivatives");
    }
    if (req.n < 3) throw UsageError("--n must be >= 3");
    if (!(req.eps > 0.0)) throw UsageError("--eps must be > 0");

    const expansion::HypothesisReport report =
        expansion::check_hypotheses(model, req.n, req.eps, grid);
    const char* verdict = expansion::hypothesis_verdict_name(report.verdict);

    Table table;
    table.header = {"t", "j", "ratio_eps", "ratio_growth", "verdict"};
    for (std::size_t i = 0; i < report.t_grid.size(); ++i) {
        for (int j = 3; j <= report.n; ++j) {
            std::vector<std::string> row;
            row.push_back(format_full(report.t_grid[i]));
            row.push_back(std::to_string(j));
            row.push_back(format_full(report.ratios_eps[j - 3][i]));
            if (j <= report.n - 1) {
                row.push_back(format_full(report.ratios_growth[j - 3][i]));
            } else {
                row.push_back(kNa);
            }
            row.push_back(verdict);
            table.rows.push_back(std::move(row));
        }
    }
    emit(table, req, out);
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"mean residual life of lifetime models from their failure rates"};
    app.require_subcommand(1);

    Request req;
    auto add_common = [&](CLI::App* cmd, bool with_grid = true) {
        cmd->add_option("--model", req.model_text, "model spec, e.g. \"chen(lambda=1,beta=0.5)\"")
            ->required();
        if (with_grid) {
            cmd->add_option("--t", req.grid.t_list, "comma-separated t values");
            cmd->add_option("--t-start", req.grid.t_start, "grid start (inclusive)");
            cmd->add_option("--t-end", req.grid.t_end, "grid end (inclusive)");
            cmd->add_option("--t-steps", req.grid.t_steps, "number of grid points");
        }
        cmd->add_option("--rel-tol", req.rel_tol, "quadrature relative tolerance")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--format", req.format, "csv or table")
            ->check(CLI::IsMember({"csv", "table"}));
    };

    CLI::App* eval = app.add_subcommand("eval", "evaluate m(t) by one method");
    add_common(eval);
    eval->add_option("--method", req.method, "quadrature, closed or expansion")
        ->check(CLI::IsMember({"quadrature", "closed", "expansion"}));
    eval->add_option("--order", req.order, "expansion truncation order n");

    CLI::App* compare = app.add_subcommand("compare", "all methods against the quadrature oracle");
    add_common(compare);
    compare->add_option("--orders", req.orders_list, "expansion orders, e.g. 2,4,6");

    CLI::App* coeffs = app.add_subcommand("coeffs", "dump expansion coefficients b_k(t)");
    add_common(coeffs);
    coeffs->add_option("--order", req.order, "coefficients up to k = order-1");

    CLI::App* phik = app.add_subcommand("phik", "dump phi_k(t) with method tags");
    add_common(phik);
    phik->add_option("--order", req.order, "entries up to k = order-1");

    CLI::App* check = app.add_subcommand("check", "expansion hypothesis diagnostics");
    add_common(check);
    check->add_option("--n", req.n, "expansion order n (>= 3)");
    check->add_option("--eps", req.eps, "epsilon of the decay condition");

    std::vector<const char*> argv;
    argv.push_back("mrl");
    for (const auto& arg : args) {
        argv.push_back(arg.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        const ModelSpec spec = parse_model_spec(req.model_text);
        const HazardModel model(spec);
        const std::vector<double> grid = build_grid(req.grid);
        validate_grid(model, grid);

        if (eval->parsed()) return cmd_eval(req, model, grid, out);
        if (compare->parsed()) return cmd_compare(req, model, grid, out);
        if (coeffs->parsed()) return cmd_coeffs(req, model, grid, out);
        if (phik->parsed()) return cmd_phik(req, model, grid, out);
        if (check->parsed()) return cmd_check(req, model, grid, out);
        err << "error: no subcommand\n";
        return 2;
    } catch (const ParseError& e) {
        err << "error: model spec: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace mrl::cli
