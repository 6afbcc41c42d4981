#include <cstdio>
#include <sstream>

#include "context.hpp"
#include "uict/ensembles.hpp"
#include "uict/error.hpp"
#include "uict/tree_sampling.hpp"
#include "uict/triangulation.hpp"

namespace uict::cli {

namespace {

struct Drawn {
    std::string body;
    std::string extension;
    std::int64_t size = 0;
    std::int64_t height = 0;
};

}  // namespace

void run_sample(const SampleOptions& o, Context& ctx) {
    const auto ensemble = parse_ensemble(o.ensemble);
    if (o.replicas == 0) throw DomainError("replicas must be positive");
    if (o.height == 0) throw DomainError("H must be positive");
    const auto dist = ctx.distribution();
    const OffspringSampler sampler(dist);

    std::vector<Drawn> drawn(o.replicas);
    parallel_for(o.replicas, ctx.common.threads, [&](std::size_t i) {
        Rng rng = ctx.stream(i);
        Drawn& d = drawn[i];
        std::ostringstream os;
        switch (ensemble) {
            case Ensemble::gw: {
                const auto t = sample_gw_tree(sampler, rng);
                write_tree(os, t);
                d = {"", "ptree", static_cast<std::int64_t>(t.edge_count()), t.height()};
                break;
            }
            case Ensemble::kesten: {
                const auto t = sample_kesten_tree(sampler, o.height, rng).tree;
                write_tree(os, t);
                d = {"", "ptree", static_cast<std::int64_t>(t.edge_count()), t.height()};
                break;
            }
            case Ensemble::uict: {
                const auto ct = sample_uict(o.height, sampler, rng);
                write_ct(os, ct);
                d = {"", "ctri", static_cast<std::int64_t>(ct.vertex_count()), ct.top()};
                break;
            }
            case Ensemble::fixed_area: {
                const auto ct = sample_ct_fixed_area(o.area, dist, rng);
                write_ct(os, ct);
                d = {"", "ctri", static_cast<std::int64_t>(ct_area(ct)), ct.top()};
                break;
            }
            case Ensemble::R:
            case Ensemble::Rprime: {
                const auto rg = ensemble == Ensemble::R ? sample_reduced_R(o.height, sampler, rng)
                                                        : sample_reduced_Rprime(o.height, sampler, rng);
                write_reduced(os, rg);
                std::int64_t total = 0;
                for (const auto l : rg.multiplicities) total += static_cast<std::int64_t>(l);
                d = {"", "rgraph", total, static_cast<std::int64_t>(rg.length())};
                break;
            }
        }
        d.body = os.str();
    });

    auto& table = ctx.add_table("samples", {"replica", "file", "size", "height"});
    for (std::size_t i = 0; i < drawn.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "%s_%06zu.%s", o.ensemble.c_str(), i, drawn[i].extension.c_str());
        ctx.write_file(name, drawn[i].body);
        table.add_row({static_cast<std::int64_t>(i), std::string(name), drawn[i].size, drawn[i].height});
    }
}

}  // namespace uict::cli
