#include "hieram/cli/run.hpp"

#include <cmath>
#include <fstream>
#include <optional>

#include "hieram/cli/pool.hpp"
#include "hieram/cli/table.hpp"
#include "hieram/dense.hpp"
#include "hieram/diagnostics.hpp"
#include "hieram/greens.hpp"
#include "hieram/operators.hpp"
#include "hieram/spectral.hpp"

namespace hieram::cli {

using nlohmann::json;

namespace {

constexpr double kClusterTol = 1e-9;

using I = std::int64_t;
using U = std::uint64_t;

double opt(const std::optional<double>& v) { return v.value_or(std::nan("")); }

std::vector<Table> run_spectrum(const ExperimentConfig& cfg)
{
    const Truncation t(cfg.hierarchy);
    const auto& seq = cfg.coupling;
    const int r = cfg.params.rank;
    const Truncation block = t.prefix(r);
    const double Nr = static_cast<double>(block.site_count());

    Table tab{"spectrum", {"source", "operator", "location", "multiplicity", "weight"}, {}};
    auto emit = [&](const char* source, const char* op, const std::vector<SpectralLine>& lines) {
        for (const auto& l : lines)
            tab.add({source, op, l.location, static_cast<U>(l.multiplicity),
                     static_cast<double>(l.multiplicity) / Nr});
    };
    auto dense = [&](const Operator& op) {
        const auto ev = dense_symmetric_eigenvalues(op.assemble_dense(cfg.params.dense_cap));
        return cluster_eigenvalues(ev, kClusterTol);
    };

    emit("exact", "cutoff", exact_cutoff_spectrum(block, seq, r));
    if (cfg.params.dense)
        emit("dense", "cutoff", dense(Operator::cutoff_laplacian(block, seq, r)));
    if (cfg.params.restricted) {
        emit("exact", "restricted", restricted_full_spectrum(block, seq, r));
        if (cfg.params.dense)
            emit("dense", "restricted", dense(Operator::restricted_full_laplacian(block, seq)));
    }
    return {tab};
}

std::vector<Table> run_dos(const ExperimentConfig& cfg)
{
    const Truncation t(cfg.hierarchy);
    const int r = cfg.params.rank;
    Table tab{"dos", {"measure", "location", "weight"}, {}};
    const auto nu = finite_volume_dos(t, cfg.coupling, r, cfg.params.dense_cap);
    for (const auto& a : nu.atoms)
        tab.add({"nu", a.location, a.weight});
    const auto mu = limiting_spectral_measure(cfg.hierarchy, cfg.coupling, cfg.params.r_max);
    for (const auto& a : mu.atoms)
        tab.add({"mu", a.location, a.weight});
    tab.add({"mu_remainder", 1.0, mu.upper_remainder});
    return {tab};
}

std::vector<Table> run_dimension(const ExperimentConfig& cfg)
{
    const auto& p = cfg.params;
    if (p.fit_min_rank < 0 || p.fit_max_rank <= p.fit_min_rank)
        throw ConfigError("need 0 <= fit_min_rank < fit_max_rank");
    const auto& seq = cfg.coupling;
    const auto mu = limiting_spectral_measure(cfg.hierarchy, seq, p.fit_max_rank);
    const double fitted = fit_spectral_dimension(mu, seq.tail(p.fit_max_rank), seq.tail(p.fit_min_rank));
    const auto analytic = spectral_dimension(cfg.hierarchy, seq);
    Table tab{"dimension", {"analytic", "fitted", "fit_min_rank", "fit_max_rank", "relative_error"}, {}};
    tab.add({opt(analytic), fitted, static_cast<I>(p.fit_min_rank), static_cast<I>(p.fit_max_rank),
             analytic ? std::abs(fitted - *analytic) / *analytic : std::nan("")});
    return {tab};
}

std::vector<Table> run_walk(const ExperimentConfig& cfg)
{
    const auto rep = walk_classification(cfg.hierarchy, cfg.coupling, cfg.params.r_max);
    Table terms{"walk", {"r", "term", "partial_sum"}, {}};
    for (std::size_t r = 0; r < rep.terms.size(); ++r)
        terms.add({static_cast<I>(r), rep.terms[r], rep.partial_sums[r]});
    Table summary{"walk_summary", {"classification", "analytic", "value", "spectral_dimension"}, {}};
    summary.add({std::string(to_string(rep.classification)), rep.analytic, opt(rep.value),
                 opt(rep.spectral_dimension)});
    return {terms, summary};
}

std::vector<Table> run_hypothesis(const ExperimentConfig& cfg)
{
    const auto& p = cfg.params;
    const PowerSequence u{p.u_exponent};
    const auto main = check_main_hypothesis(cfg.coupling, cfg.hierarchy, u, p.r_max);
    const auto mol = check_molchanov_condition(cfg.coupling, u, p.r_max);
    const auto am = aizenman_molchanov_bounds(cfg.coupling, cfg.hierarchy, p.am_s, p.r_max);

    Table series{"hypothesis", {"condition", "r", "term", "partial_sum"}, {}};
    Table summary{"hypothesis_summary",
                  {"condition", "test_sequence", "verdict", "last_term", "limiting_ratio", "value"},
                  {}};
    for (const auto* rep : {&main, &mol}) {
        for (std::size_t k = 0; k < rep->terms.size(); ++k)
            series.add({rep->condition, static_cast<I>(k + 1), rep->terms[k], rep->partial_sums[k]});
        summary.add({rep->condition, rep->test_sequence, std::string(to_string(rep->verdict)),
                     rep->last_term, opt(rep->limiting_ratio),
                     rep->partial_sums.empty() ? std::nan("") : rep->partial_sums.back()});
    }
    auto am_row = [&](const char* name, const SeriesEstimate& e) {
        const std::string verdict = !e.converges ? "unknown" : *e.converges ? "converges" : "diverges";
        summary.add({std::string(name), "s=" + format_cell(am.s), verdict, std::nan(""),
                     opt(e.term_ratio), e.value});
    };
    am_row("aizenman_molchanov_lower", am.lower);
    am_row("aizenman_molchanov_upper", am.upper);

    Table ledger{"borel_cantelli",
                 {"r", "u", "M", "bound_term", "ratio_term", "ratio_sum", "inverse_u_sum",
                  "coupling_term", "coupling_sum"},
                 {}};
    for (const auto& row : borel_cantelli_profile(cfg.coupling, cfg.hierarchy, u, p.r_max))
        ledger.add({static_cast<I>(row.r), row.u, row.M, row.bound_term, row.ratio_term, row.ratio_sum,
                    row.inverse_u_sum, row.coupling_term, row.coupling_sum});
    return {series, summary, ledger};
}

std::vector<Table> run_green(const ExperimentConfig& cfg)
{
    const auto& p = cfg.params;
    const Truncation t(cfg.hierarchy);
    if (p.site >= t.site_count())
        throw ConfigError("params.site outside the truncation");
    const auto omega = sample_potential(cfg.disorder, t, cfg.seed, p.index);
    const Complex z(p.energy_re, p.energy_im);
    const GreenCascade c(t, cfg.coupling, omega.values, z, p.rank);

    const auto col = green_column(c, p.site, p.rank);
    Table column{"green", {"y", "distance", "re", "im"}, {}};
    for (Site y : col.support) {
        const Complex g = col.at(y);
        column.add({static_cast<U>(y), static_cast<I>(t.distance(p.site, y)), g.real(), g.imag()});
    }

    const Site target = p.target.value_or(col.support.back());
    if (target >= t.site_count())
        throw ConfigError("params.target outside the truncation");
    const auto entry = green_entry(c, p.site, target, p.rank);
    Table terms{"green_terms", {"kind", "level", "re", "im"}, {}};
    terms.add({"base", I{0}, entry.base.real(), entry.base.imag()});
    for (const auto& lt : entry.terms)
        terms.add({"term", static_cast<I>(lt.level), lt.term.real(), lt.term.imag()});
    terms.add({"value", static_cast<I>(p.rank), entry.value.real(), entry.value.imag()});
    return {column, terms};
}

SweepConfig sweep_config(const ExperimentConfig& cfg, bool ipr)
{
    SweepConfig s;
    s.hierarchy = cfg.hierarchy;
    s.coupling = cfg.coupling;
    s.disorder = cfg.disorder;
    s.grid = cfg.grid;
    s.ranks = cfg.ranks;
    s.realizations = cfg.realizations;
    s.seed = cfg.seed;
    s.site = cfg.params.site;
    s.compute_ipr = ipr;
    s.mid_fraction = cfg.params.mid_fraction;
    return s;
}

LocalizationReport sweep(const SweepConfig& s, std::size_t threads)
{
    std::vector<RealizationResult> parts(s.realizations);
    parallel_for(s.realizations, threads, [&](std::size_t i) { parts[i] = sweep_realization(s, i); });
    auto rep = reduce_sweep(s, std::move(parts));
    if (rep.skipped_points == s.realizations * s.grid.points)
        throw PoleOnlyGrid("every grid energy tripped the pole guard");
    return rep;
}

Table moments_table(const LocalizationReport& rep)
{
    Table tab{"moments", {"seed", "index", "e", "r", "S_r", "skipped"}, {}};
    for (const auto& c : rep.cells)
        tab.add({static_cast<U>(c.seed), static_cast<U>(c.index), c.energy, static_cast<I>(c.r),
                 c.skipped ? std::nan("") : c.moment, c.skipped});
    return tab;
}

std::vector<Table> run_moments(const ExperimentConfig& cfg, std::size_t threads)
{
    return {moments_table(sweep(sweep_config(cfg, false), threads))};
}

std::vector<Table> run_localize(const ExperimentConfig& cfg, std::size_t threads)
{
    const auto rep = sweep(sweep_config(cfg, true), threads);
    Table ipr{"ipr", {"index", "r", "eigenvalue", "ipr"}, {}};
    for (const auto& row : rep.ipr)
        ipr.add({static_cast<U>(row.index), static_cast<I>(row.r), row.eigenvalue, row.ipr});
    Table ratios{"ratios", {"r_from", "r_to", "median", "samples"}, {}};
    for (const auto& s : rep.ratios)
        ratios.add({static_cast<I>(s.r_from), static_cast<I>(s.r_to), s.median, static_cast<U>(s.samples)});
    Table summary{"localize", {"quantity", "value"}, {}};
    summary.add({"skipped_points", static_cast<double>(rep.skipped_points)});
    summary.add({"median_mid_ipr", opt(rep.median_mid_ipr)});
    summary.add({"ipr_floor", rep.ipr_floor});
    summary.add({"ipr_over_floor", rep.median_mid_ipr && rep.ipr_floor > 0
                                       ? *rep.median_mid_ipr / rep.ipr_floor
                                       : std::nan("")});
    return {moments_table(rep), ipr, ratios, summary};
}

std::vector<Table> run_bound(const ExperimentConfig& cfg, std::size_t threads)
{
    const auto& p = cfg.params;
    const Truncation t(cfg.hierarchy);
    const int r = p.rank;
    double M = 0.0;
    if (p.threshold) {
        M = *p.threshold;
    } else {
        if (r < 1)
            throw ConfigError("bound needs params.rank >= 1 or an explicit params.threshold");
        const double uN = PowerSequence{p.u_exponent}(r) * static_cast<double>(t.size(r));
        M = uN * uN;
    }
    std::vector<BoundCheckReport> reps(cfg.realizations);
    parallel_for(cfg.realizations, threads, [&](std::size_t i) {
        const auto omega = sample_potential(cfg.disorder, t, cfg.seed, i);
        reps[i] = measure_bound_check(t, cfg.coupling, omega.values, r, M, cfg.grid);
    });
    Table tab{"bound",
              {"index", "r", "M", "empirical", "bound", "allowance", "sign_changes", "pole_points",
               "covers_spectrum", "pass"},
              {}};
    for (std::size_t i = 0; i < reps.size(); ++i) {
        const auto& b = reps[i];
        tab.add({static_cast<U>(i), static_cast<I>(b.rank), b.threshold, b.empirical, b.bound,
                 b.allowance, static_cast<U>(b.sign_changes), static_cast<U>(b.pole_points),
                 b.covers_spectrum, b.pass});
    }
    return {tab};
}

} // namespace

RunResult run(const std::string& subcommand, const ExperimentConfig& cfg, const RunOptions& opts)
{
    std::vector<Table> tables;
    const std::size_t threads = std::max<std::size_t>(1, opts.threads);
    if (subcommand == "spectrum")
        tables = run_spectrum(cfg);
    else if (subcommand == "dos")
        tables = run_dos(cfg);
    else if (subcommand == "dimension")
        tables = run_dimension(cfg);
    else if (subcommand == "walk")
        tables = run_walk(cfg);
    else if (subcommand == "hypothesis")
        tables = run_hypothesis(cfg);
    else if (subcommand == "green")
        tables = run_green(cfg);
    else if (subcommand == "moments")
        tables = run_moments(cfg, threads);
    else if (subcommand == "localize")
        tables = run_localize(cfg, threads);
    else if (subcommand == "bound")
        tables = run_bound(cfg, threads);
    else
        throw ConfigError("unknown subcommand '" + subcommand + "'");

    std::error_code ec;
    std::filesystem::create_directories(opts.out_dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory '" + opts.out_dir.string() +
                                 "': " + ec.message());

    RunResult res;
    json manifest;
    manifest["version"] = std::string(kVersion);
    manifest["subcommand"] = subcommand;
    manifest["config"] = to_json(cfg);
    json files = json::array();
    for (const auto& t : tables)
        files.push_back(t.name + (cfg.format == Format::Csv ? ".csv" : ".json"));
    manifest["files"] = files;

    const auto manifest_path = opts.out_dir / "manifest.json";
    std::ofstream out(manifest_path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + manifest_path.string() + "'");
    out << manifest.dump(2) << '\n';
    res.files.push_back(manifest_path);
    for (const auto& t : tables)
        res.files.push_back(write_table(t, opts.out_dir, cfg.format));
    return res;
}

std::string ErrorReport::to_json() const
{
    json j;
    j["error"] = {{"kind", kind}, {"message", message}, {"exit_code", exit_code}};
    return j.dump();
}

ErrorReport classify_error(std::exception_ptr e)
{
    try {
        std::rethrow_exception(e);
    } catch (const ConfigError& x) {
        return {2, "config", x.what()};
    } catch (const DenseCapExceeded& x) {
        return {3, "dense_cap", x.what()};
    } catch (const PoleProximity& x) {
        return {4, "pole_proximity", x.what()};
    } catch (const PoleOnlyGrid& x) {
        return {4, "pole_only_grid", x.what()};
    } catch (const std::invalid_argument& x) {
        return {2, "invalid_argument", x.what()};
    } catch (const std::out_of_range& x) {
        return {2, "out_of_range", x.what()};
    } catch (const std::domain_error& x) {
        return {5, "domain", x.what()};
    } catch (const std::exception& x) {
        return {1, "runtime", x.what()};
    } catch (...) {
        return {1, "unknown", "unknown error"};
    }
}

} // namespace hieram::cli
