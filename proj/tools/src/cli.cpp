#include "uict/cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "context.hpp"
#include "uict/error.hpp"

namespace uict::cli {

const Table& RunResult::table(std::string_view name) const {
    for (const auto& t : tables)
        if (t.name == name) return t;
    throw std::out_of_range("no table named " + std::string(name));
}

OffspringDistribution Context::distribution() const {
    if (common.dist == "geometric") return make_geometric();
    if (common.dist == "dimer") return make_dimer(common.a);
    throw DomainError("unknown offspring law '" + common.dist + "' (geometric or dimer)");
}

Table& Context::add_table(std::string name, std::vector<std::string> columns) {
    tables.push_back(Table{std::move(name), std::move(columns), {}});
    return tables.back();
}

void Context::write_file(const std::string& name, const std::string& body) {
    const auto path = out_dir / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open " + path.string() + " for writing");
    f << "# manifest=" << manifest_hash << '\n' << body;
    if (!f) throw FormatError("write to " + path.string() + " failed");
    files.push_back(path);
}

namespace {

std::vector<std::int64_t> expand(const std::string& text, bool& ok) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty()) continue;
        const auto dots = part.find("..");
        try {
            std::size_t used = 0;
            if (dots == std::string::npos) {
                out.push_back(std::stoll(part, &used));
                if (used != part.size()) ok = false;
            } else {
                const auto lo = std::stoll(part.substr(0, dots));
                const auto hi = std::stoll(part.substr(dots + 2));
                if (hi < lo || hi - lo > 100'000'000) ok = false;
                for (auto v = lo; ok && v <= hi; ++v) out.push_back(v);
            }
        } catch (const std::exception&) {
            ok = false;
        }
    }
    return out;
}

}  // namespace

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    bool ok = true;
    auto v = expand(text, ok);
    if (!ok || v.empty()) throw DomainError("cannot read integer list '" + text + "'");
    return v;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(part, &used));
            if (used != part.size()) throw DomainError("");
        } catch (const std::exception&) {
            throw DomainError("cannot read real list '" + text + "'");
        }
    }
    if (out.empty()) throw DomainError("empty real list");
    return out;
}

namespace {

std::string sha256_hex(const std::string& data, std::size_t chars) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
    return os.str().substr(0, chars);
}

// Options that change how a run executes but not what it computes.
bool affects_results(const std::string& name) {
    return name != "help" && name != "config" && name != "out" && name != "threads" && name != "quiet";
}

// Reads a flat key = value file into "--key value" tokens.
std::vector<std::string> config_tokens(const std::string& path, const std::string& command) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read config file " + path);
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigINI().from_config(in);
    } catch (const CLI::Error& e) {
        throw DomainError("malformed config file " + path + ": " + e.what());
    }
    std::vector<std::string> tokens;
    for (const auto& item : items) {
        if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == command)) continue;
        if (item.name.empty() || item.name == "++" || item.name == "--") continue;
        tokens.push_back("--" + item.name);
        for (const auto& v : item.inputs) tokens.push_back(v);
    }
    return tokens;
}

void add_common(CLI::App& sub, Common& c) {
    sub.add_option("--seed", c.seed, "Master seed");
    sub.add_option("--threads", c.threads, "Worker threads for replicas")->check(CLI::PositiveNumber);
    sub.add_option("--out", c.out, "Output directory (default $UICT_OUTPUT_DIR or .)");
    sub.add_option("--dist", c.dist, "Offspring law: geometric or dimer");
    sub.add_option("--a", c.a, "Dimer activity a > 0");
    sub.add_flag("--quiet", c.quiet, "Do not print tables");
    sub.add_option("--config", "Flat key = value file; command-line flags override it");
}

}  // namespace

RunResult execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunResult result;
    CLI::App app{"Causal triangulation and random-tree laboratory", "uict"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    Common common;
    SampleOptions so;
    ExactOptions eo;
    WalkOptions wo;
    DimsOptions dopt;
    ResistOptions ro;
    DisttestOptions to;

    auto* sample = app.add_subcommand("sample", "Draw ensemble samples and write them to files");
    add_common(*sample, common);
    sample->add_option("--ensemble", so.ensemble, "gw, kesten, uict, fixed_area, R or Rprime");
    sample->add_option("--H", so.height, "Window height or reduced-graph length");
    sample->add_option("--N", so.area, "Half the area for fixed_area");
    sample->add_option("--replicas", so.replicas, "Number of samples");

    auto* exact = app.add_subcommand("exact", "Closed forms and oracles");
    add_common(*exact, common);
    exact->add_option("--table", eo.table, "xseq, partition, girth, moments, fR or catalan");
    exact->add_option("--g", eo.g, "Fugacity in (0, 1/2]");
    exact->add_option("--k-max", eo.k_max, "Length of the X_k sequence");
    exact->add_option("--n", eo.n, "Heights or sizes, e.g. 1..5");
    exact->add_option("--oracle-max", eo.oracle_max, "Largest n checked against the transfer-sum oracle");
    exact->add_option("--tol", eo.tol, "Oracle truncation tolerance");
    exact->add_option("--k", eo.k, "Levels for the moment formulas");
    exact->add_option("--R", eo.radii, "Radii for f_R");
    exact->add_option("--z", eo.z, "Arguments for f_R");

    auto* walk = app.add_subcommand("walk", "Random-walk returns, generating functions and brackets");
    add_common(*walk, common);
    walk->add_option("--mode", wo.mode, "exact, mc, bracket or chain");
    walk->add_option("--fixture", wo.fixture, "path2, path7, cycle3, cycle8, ct_small, tree_small or halfline");
    walk->add_option("--graph", wo.graph, "CTRI, PTREE or RGRAPH file");
    walk->add_option("--ensemble", wo.ensemble, "Sampled graphs: gw, kesten, uict, R or Rprime");
    walk->add_option("--H", wo.height, "Window height of sampled graphs");
    walk->add_option("--length", wo.length, "Length of reduced graphs");
    walk->add_option("--N", wo.depth, "Bracket depth (default length - 1)");
    walk->add_option("--t-max", wo.t_max, "Walk horizon");
    walk->add_option("--walkers", wo.walkers, "Walkers per graph");
    walk->add_option("--graphs", wo.graphs, "Number of sampled graphs");
    walk->add_option("--fit-min", wo.fit_min, "First time of the return-probability fit");
    walk->add_option("--censor-threshold", wo.censor_threshold, "Largest accepted censored fraction");
    walk->add_option("--x", wo.x, "x values for Q and P");
    walk->add_option("--upper", wo.upper, "Upper bracket boundary: certain or trivial");

    auto* dims = app.add_subcommand("dims", "Hausdorff and spectral dimension estimates");
    add_common(*dims, common);
    dims->add_option("--ensemble", dopt.ensemble, "R, Rprime, uict, kesten or gw");
    dims->add_option("--quantity", dopt.quantity, "ds or dh");
    dims->add_option("--graphs", dopt.graphs, "Number of sampled graphs");
    dims->add_option("--length", dopt.length, "Length of reduced graphs");
    dims->add_option("--j-min", dopt.j_min, "Grid x = 2^-j from j-min");
    dims->add_option("--j-max", dopt.j_max, "to j-max");
    dims->add_option("--max-width", dopt.max_width, "Largest relative bracket width kept");
    dims->add_option("--radii", dopt.radii, "Radius grid for dh");
    dims->add_option("--H", dopt.height, "Window height for walks");
    dims->add_option("--t-max", dopt.t_max, "Walk horizon");
    dims->add_option("--walkers", dopt.walkers, "Walkers per graph");
    dims->add_option("--fit-min", dopt.fit_min, "First time of the return-probability fit");
    dims->add_option("--censor-threshold", dopt.censor_threshold, "Largest accepted censored fraction");

    auto* resist = app.add_subcommand("resist", "Effective resistance profiles");
    add_common(*resist, common);
    resist->add_option("--ensemble", ro.ensemble, "uict");
    resist->add_option("--fixture", ro.fixture, "symmetric");
    resist->add_option("--graph", ro.graph, "CTRI file");
    resist->add_option("--m", ro.m, "|S_1| values for the symmetric fixture");
    resist->add_option("--H", ro.height, "Window height");
    resist->add_option("--graphs", ro.graphs, "Number of sampled windows");
    resist->add_option("--K", ro.k, "Radii, e.g. 1..64");
    resist->add_option("--boundary", ro.boundary, "added_top or collapsed");
    resist->add_option("--tol", ro.tol, "Iterative solver tolerance");
    resist->add_option("--direct-limit", ro.direct_limit, "Largest system solved by factorization");

    auto* dt = app.add_subcommand("disttest", "Sampled laws against exact ones");
    add_common(*dt, common);
    dt->add_option("--test", to.test, "slice, moments, height, ballgf, uniform or bijection");
    dt->add_option("--ensemble", to.ensemble, "R, Rprime or uict (slice test)");
    dt->add_option("--level", to.level, "Levels n >= 2");
    dt->add_option("--samples", to.samples, "Sample count");
    dt->add_option("--bins", to.bins, "Categories before the tail bin");
    dt->add_option("--k", to.k, "Levels for the moment test");
    dt->add_option("--R", to.radii, "Radii");
    dt->add_option("--z", to.z, "Argument of the ball-size generating function");
    dt->add_option("--N", to.area, "Half area for the uniformity test");
    dt->add_option("--max-area", to.max_area, "Exhaustive bijection checks up to this area");
    dt->add_option("--random", to.random, "Random bijection round trips");
    dt->add_option("--max-edges", to.max_edges, "Largest random tree");

    // Config file values go first so explicit flags win.
    std::vector<std::string> argv = args;
    std::string command = argv.empty() ? "" : argv.front();
    try {
        for (std::size_t i = 1; i < argv.size(); ++i) {
            std::string path;
            if (argv[i] == "--config" && i + 1 < argv.size()) path = argv[i + 1];
            else if (argv[i].rfind("--config=", 0) == 0) path = argv[i].substr(9);
            if (path.empty()) continue;
            const auto tokens = config_tokens(path, command);
            argv.insert(argv.begin() + 1, tokens.begin(), tokens.end());
            break;
        }
    } catch (const Error& e) {
        result.exit_code = dynamic_cast<const DomainError*>(&e) ? exit_config : exit_io;
        result.error = e.what();
        err << "error: " << e.what() << '\n';
        return result;
    }

    try {
        std::vector<std::string> reversed(argv.rbegin(), argv.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return result;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return result;
    } catch (const CLI::ParseError& e) {
        result.exit_code = exit_config;
        result.error = e.what();
        err << "error: " << e.what() << '\n';
        return result;
    }

    CLI::App* sub = app.get_subcommands().front();
    Context ctx;
    ctx.common = common;
    ctx.command = sub->get_name();

    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    {
        std::vector<std::pair<std::string, std::string>> kv;
        for (const auto* opt : sub->get_options()) {
            const auto name = opt->get_single_name();
            if (!affects_results(name)) continue;
            std::string value;
            if (opt->count() > 0) {
                for (const auto& r : opt->reduced_results()) value += (value.empty() ? "" : " ") + r;
                if (opt->get_type_size() == 0) value = "true";
            } else {
                value = opt->get_default_str();
            }
            kv.emplace_back(name, value);
        }
        std::sort(kv.begin(), kv.end());
        for (const auto& [k, v] : kv) params[k] = v;
    }
    nlohmann::ordered_json manifest;
    manifest["command"] = ctx.command;
    manifest["version"] = UICT_VERSION;
    manifest["seed"] = common.seed;
    manifest["parameters"] = params;
    ctx.manifest_hash = sha256_hex(manifest.dump(), 16);
    result.manifest_hash = ctx.manifest_hash;

    const auto started = std::chrono::steady_clock::now();
    try {
        std::filesystem::path dir = common.out;
        if (dir.empty()) {
            const char* env = std::getenv("UICT_OUTPUT_DIR");
            dir = env && *env ? env : ".";
        }
        std::filesystem::create_directories(dir);
        ctx.out_dir = dir;
        result.output_dir = dir;

        if (ctx.command == "sample") run_sample(so, ctx);
        else if (ctx.command == "exact") run_exact(eo, ctx);
        else if (ctx.command == "walk") run_walk(wo, ctx);
        else if (ctx.command == "dims") run_dims(dopt, ctx);
        else if (ctx.command == "resist") run_resist(ro, ctx);
        else if (ctx.command == "disttest") run_disttest(to, ctx);

        for (const auto& t : ctx.tables) {
            std::ostringstream body;
            write_csv(body, t, ctx.manifest_hash);
            const auto path = ctx.out_dir / (ctx.command + "_" + t.name + ".csv");
            std::ofstream f(path, std::ios::binary);
            if (!f) throw FormatError("cannot open " + path.string() + " for writing");
            f << body.str();
            ctx.files.push_back(path);
            if (!common.quiet) {
                write_aligned(out, t);
                if (t.size() > 40) out << "(full table in " << path.string() << ")\n";
                out << '\n';
            }
        }
        manifest["hash"] = ctx.manifest_hash;
        manifest["threads"] = common.threads;
        manifest["compiler"] = __VERSION__;
        manifest["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        const auto mpath = ctx.out_dir / (ctx.command + "_manifest.json");
        std::ofstream mf(mpath);
        if (!mf) throw FormatError("cannot open " + mpath.string() + " for writing");
        mf << manifest.dump(2) << '\n';
        ctx.files.push_back(mpath);
    } catch (const DomainError& e) {
        result.exit_code = exit_config;
        result.error = e.what();
    } catch (const NumericalGuardError& e) {
        result.exit_code = exit_numerical;
        result.error = e.what();
    } catch (const FormatError& e) {
        result.exit_code = exit_io;
        result.error = e.what();
    } catch (const std::filesystem::filesystem_error& e) {
        result.exit_code = exit_io;
        result.error = e.what();
    } catch (const std::exception& e) {
        result.exit_code = exit_internal;
        result.error = e.what();
    }
    if (!result.ok()) err << "error: " << result.error << '\n';
    result.files = std::move(ctx.files);
    result.tables.assign(std::make_move_iterator(ctx.tables.begin()), std::make_move_iterator(ctx.tables.end()));
    return result;
}

}  // namespace uict::cli
