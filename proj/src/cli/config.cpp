#include "hieram/cli/config.hpp"

#include <fstream>
#include <set>

namespace hieram::cli {

using nlohmann::json;

namespace {

void expect_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed)
{
    if (!obj.is_object())
        throw ConfigError(where + " must be an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + key + "' in " + where);
}

const json& require(const json& obj, const std::string& where, const std::string& key)
{
    if (!obj.contains(key))
        throw ConfigError(where + " is missing '" + key + "'");
    return obj.at(key);
}

double as_double(const json& v, const std::string& what)
{
    if (!v.is_number())
        throw ConfigError(what + " must be a number");
    return v.get<double>();
}

long long as_int(const json& v, const std::string& what)
{
    if (!v.is_number_integer())
        throw ConfigError(what + " must be an integer");
    return v.get<long long>();
}

std::size_t as_count(const json& v, const std::string& what)
{
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw ConfigError(what + " must be a non-negative integer");
    return v.get<std::size_t>();
}

std::uint64_t as_u64(const json& v, const std::string& what)
{
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw ConfigError(what + " must be an unsigned 64-bit integer");
    return v.get<std::uint64_t>();
}

bool as_bool(const json& v, const std::string& what)
{
    if (!v.is_boolean())
        throw ConfigError(what + " must be true or false");
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& what)
{
    if (!v.is_string())
        throw ConfigError(what + " must be a string");
    return v.get<std::string>();
}

int as_rank(const json& v, const std::string& what)
{
    const auto r = as_int(v, what);
    if (r < 0 || r > 100000)
        throw ConfigError(what + " out of range");
    return static_cast<int>(r);
}

HierarchySpec parse_hierarchy(const json& h)
{
    expect_keys(h, "hierarchy", {"degree", "branching", "depth"});
    const int depth = as_rank(require(h, "hierarchy", "depth"), "hierarchy.depth");
    if (h.contains("degree") == h.contains("branching"))
        throw ConfigError("hierarchy needs exactly one of 'degree' or 'branching'");
    if (h.contains("degree"))
        return HierarchySpec::homogeneous(static_cast<int>(as_int(h["degree"], "hierarchy.degree")),
                                          depth);
    const auto& b = h["branching"];
    if (!b.is_array())
        throw ConfigError("hierarchy.branching must be an array");
    std::vector<int> branching;
    for (const auto& v : b)
        branching.push_back(static_cast<int>(as_int(v, "hierarchy.branching entry")));
    return HierarchySpec::with_branching(std::move(branching), depth);
}

CouplingSequence parse_coupling(const json& c)
{
    if (!c.is_object())
        throw ConfigError("coupling must be an object");
    const auto family = as_string(require(c, "coupling", "family"), "coupling.family");
    if (family == "geometric") {
        expect_keys(c, "coupling", {"family", "rho"});
        return CouplingSequence(Geometric{as_double(require(c, "coupling", "rho"), "coupling.rho")});
    }
    if (family == "polygeometric") {
        expect_keys(c, "coupling", {"family", "base", "epsilon"});
        return CouplingSequence(
            PolyGeometric{static_cast<int>(as_int(require(c, "coupling", "base"), "coupling.base")),
                          as_double(require(c, "coupling", "epsilon"), "coupling.epsilon")});
    }
    if (family == "explicit") {
        expect_keys(c, "coupling", {"family", "weights", "tail_mass"});
        const auto& w = require(c, "coupling", "weights");
        if (!w.is_array())
            throw ConfigError("coupling.weights must be an array");
        Explicit e;
        for (const auto& v : w)
            e.weights.push_back(as_double(v, "coupling.weights entry"));
        if (c.contains("tail_mass"))
            e.tail_mass = as_double(c["tail_mass"], "coupling.tail_mass");
        return CouplingSequence(std::move(e));
    }
    throw ConfigError("unknown coupling family '" + family + "'");
}

DistributionSpec parse_disorder(const json& d)
{
    if (!d.is_object())
        throw ConfigError("disorder must be an object");
    const auto kind = as_string(require(d, "disorder", "distribution"), "disorder.distribution");
    auto num = [&](const char* key) {
        return as_double(require(d, "disorder", key), std::string("disorder.") + key);
    };
    if (kind == "uniform") {
        expect_keys(d, "disorder", {"distribution", "center", "width"});
        return DistributionSpec(UniformDist{d.contains("center") ? num("center") : 0.0, num("width")});
    }
    if (kind == "gaussian") {
        expect_keys(d, "disorder", {"distribution", "mean", "sigma"});
        return DistributionSpec(GaussianDist{d.contains("mean") ? num("mean") : 0.0, num("sigma")});
    }
    if (kind == "cauchy") {
        expect_keys(d, "disorder", {"distribution", "location", "scale"});
        return DistributionSpec(CauchyDist{d.contains("location") ? num("location") : 0.0, num("scale")});
    }
    if (kind == "bernoulli") {
        expect_keys(d, "disorder", {"distribution", "a", "b", "q"});
        return DistributionSpec(BernoulliDist{num("a"), num("b"), num("q")});
    }
    throw ConfigError("unknown disorder distribution '" + kind + "'");
}

RunParams parse_params(const json& p, int depth)
{
    RunParams out;
    out.rank = depth;
    if (p.is_null())
        return out;
    expect_keys(p, "params",
                {"rank", "r_max", "fit_min_rank", "fit_max_rank", "u_exponent", "am_s", "threshold",
                 "site", "target", "energy_re", "energy_im", "index", "restricted", "dense",
                 "mid_fraction", "dense_cap"});
    if (p.contains("rank"))
        out.rank = as_rank(p["rank"], "params.rank");
    if (p.contains("r_max"))
        out.r_max = as_rank(p["r_max"], "params.r_max");
    if (p.contains("fit_min_rank"))
        out.fit_min_rank = as_rank(p["fit_min_rank"], "params.fit_min_rank");
    if (p.contains("fit_max_rank"))
        out.fit_max_rank = as_rank(p["fit_max_rank"], "params.fit_max_rank");
    if (p.contains("u_exponent"))
        out.u_exponent = as_double(p["u_exponent"], "params.u_exponent");
    if (p.contains("am_s"))
        out.am_s = as_double(p["am_s"], "params.am_s");
    if (p.contains("threshold") && !p["threshold"].is_null())
        out.threshold = as_double(p["threshold"], "params.threshold");
    if (p.contains("site"))
        out.site = as_count(p["site"], "params.site");
    if (p.contains("target") && !p["target"].is_null())
        out.target = as_count(p["target"], "params.target");
    if (p.contains("energy_re"))
        out.energy_re = as_double(p["energy_re"], "params.energy_re");
    if (p.contains("energy_im"))
        out.energy_im = as_double(p["energy_im"], "params.energy_im");
    if (p.contains("index"))
        out.index = as_count(p["index"], "params.index");
    if (p.contains("restricted"))
        out.restricted = as_bool(p["restricted"], "params.restricted");
    if (p.contains("dense"))
        out.dense = as_bool(p["dense"], "params.dense");
    if (p.contains("mid_fraction"))
        out.mid_fraction = as_double(p["mid_fraction"], "params.mid_fraction");
    if (p.contains("dense_cap"))
        out.dense_cap = as_count(p["dense_cap"], "params.dense_cap");
    return out;
}

} // namespace

Format parse_format(const std::string& s)
{
    if (s == "csv")
        return Format::Csv;
    if (s == "json")
        return Format::Json;
    throw ConfigError("format must be 'csv' or 'json'");
}

std::string to_string(Format f) { return f == Format::Csv ? "csv" : "json"; }

ExperimentConfig parse_config(const json& input, const Overrides& overrides)
{
    // a manifest carries the resolved config under "config"
    const json& doc = (input.is_object() && input.contains("config") && input.contains("version"))
                          ? input.at("config")
                          : input;
    expect_keys(doc, "config",
                {"hierarchy", "coupling", "disorder", "grid", "ranks", "realizations", "seed",
                 "format", "params"});

    ExperimentConfig cfg;
    try {
        cfg.hierarchy = parse_hierarchy(require(doc, "config", "hierarchy"));
        cfg.coupling = parse_coupling(require(doc, "config", "coupling"));
        cfg.disorder = doc.contains("disorder") ? parse_disorder(doc["disorder"])
                                                : DistributionSpec(UniformDist{0.0, 1.0});
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    const int depth = cfg.hierarchy.depth();

    cfg.grid = EnergyGrid::covering(cfg.disorder);
    if (doc.contains("grid")) {
        const auto& g = doc["grid"];
        expect_keys(g, "grid", {"min", "max", "points"});
        if (g.contains("min"))
            cfg.grid.min = as_double(g["min"], "grid.min");
        if (g.contains("max"))
            cfg.grid.max = as_double(g["max"], "grid.max");
        if (g.contains("points"))
            cfg.grid.points = as_count(g["points"], "grid.points");
    }
    if (cfg.grid.points < 2 || !(cfg.grid.max > cfg.grid.min))
        throw ConfigError("grid must have points >= 2 and max > min");

    if (doc.contains("ranks")) {
        if (!doc["ranks"].is_array())
            throw ConfigError("ranks must be an array");
        for (const auto& v : doc["ranks"])
            cfg.ranks.push_back(as_rank(v, "ranks entry"));
    } else {
        for (int r = 0; r <= depth; ++r)
            cfg.ranks.push_back(r);
    }
    for (std::size_t i = 0; i < cfg.ranks.size(); ++i)
        if (cfg.ranks[i] > depth || (i > 0 && cfg.ranks[i] <= cfg.ranks[i - 1]))
            throw ConfigError("ranks must be strictly increasing and at most the depth");
    if (cfg.ranks.empty())
        throw ConfigError("ranks must not be empty");

    if (doc.contains("realizations"))
        cfg.realizations = as_count(doc["realizations"], "realizations");
    if (cfg.realizations == 0)
        throw ConfigError("realizations must be >= 1");

    if (overrides.seed)
        cfg.seed = *overrides.seed;
    else if (doc.contains("seed"))
        cfg.seed = as_u64(doc["seed"], "seed");
    else
        throw ConfigError("seed is required (config 'seed' or --seed)");

    if (overrides.format)
        cfg.format = *overrides.format;
    else if (doc.contains("format"))
        cfg.format = parse_format(as_string(doc["format"], "format"));

    cfg.params = parse_params(doc.contains("params") ? doc["params"] : json(), depth);
    if (cfg.params.rank > depth)
        throw ConfigError("params.rank exceeds the hierarchy depth");
    return cfg;
}

ExperimentConfig load_config(const std::string& path, const Overrides& overrides)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(doc, overrides);
}

json to_json(const ExperimentConfig& cfg)
{
    json out;
    json h;
    if (cfg.hierarchy.is_homogeneous())
        h["degree"] = cfg.hierarchy.degree();
    else
        h["branching"] = cfg.hierarchy.branching();
    h["depth"] = cfg.hierarchy.depth();
    out["hierarchy"] = h;

    json c;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Geometric>) {
                c = {{"family", "geometric"}, {"rho", p.rho}};
            } else if constexpr (std::is_same_v<T, PolyGeometric>) {
                c = {{"family", "polygeometric"}, {"base", p.base}, {"epsilon", p.epsilon}};
            } else {
                c = {{"family", "explicit"}, {"weights", p.weights}, {"tail_mass", p.tail_mass}};
            }
        },
        cfg.coupling.params());
    out["coupling"] = c;

    json d;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, UniformDist>)
                d = {{"distribution", "uniform"}, {"center", p.center}, {"width", p.width}};
            else if constexpr (std::is_same_v<T, GaussianDist>)
                d = {{"distribution", "gaussian"}, {"mean", p.mean}, {"sigma", p.sigma}};
            else if constexpr (std::is_same_v<T, CauchyDist>)
                d = {{"distribution", "cauchy"}, {"location", p.location}, {"scale", p.scale}};
            else
                d = {{"distribution", "bernoulli"}, {"a", p.a}, {"b", p.b}, {"q", p.q}};
        },
        cfg.disorder.variant());
    out["disorder"] = d;

    out["grid"] = {{"min", cfg.grid.min}, {"max", cfg.grid.max}, {"points", cfg.grid.points}};
    out["ranks"] = cfg.ranks;
    out["realizations"] = cfg.realizations;
    out["seed"] = cfg.seed;
    out["format"] = to_string(cfg.format);

    const auto& p = cfg.params;
    json pj = {{"rank", p.rank},
               {"r_max", p.r_max},
               {"fit_min_rank", p.fit_min_rank},
               {"fit_max_rank", p.fit_max_rank},
               {"u_exponent", p.u_exponent},
               {"am_s", p.am_s},
               {"site", p.site},
               {"energy_re", p.energy_re},
               {"energy_im", p.energy_im},
               {"index", p.index},
               {"restricted", p.restricted},
               {"dense", p.dense},
               {"mid_fraction", p.mid_fraction},
               {"dense_cap", p.dense_cap}};
    pj["threshold"] = p.threshold ? json(*p.threshold) : json(nullptr);
    pj["target"] = p.target ? json(*p.target) : json(nullptr);
    out["params"] = pj;
    return out;
}

} // namespace hieram::cli
