#include "kmatch/report.hpp"

#include <ostream>
#include <sstream>

namespace kmatch {

const char* branch_name(Branch b) {
    switch (b) {
        case Branch::kUgmStep2: return "ugm-step2";
        case Branch::kUgmStep4: return "ugm-step4";
        case Branch::kUgmStep5: return "ugm-step5";
        case Branch::kRsubgStep4: return "rsubg-step4";
        case Branch::kRsubgStep5: return "rsubg-step5";
        case Branch::kNone: break;
    }
    return "none";
}

std::uint32_t injectivity_rounds(const RunConfig& cfg, std::size_t k, bool weighted_pipeline) {
    double bits;
    if (cfg.paper_epsilon) {
        double kd = static_cast<double>(std::max<std::size_t>(k, 1));
        // eps = 2^(-k^1.5) resp. eps = k^(-k^2)
        bits = weighted_pipeline ? kd * kd * std::log2(kd) : std::pow(kd, 1.5);
    } else {
        bits = std::log2(1.0 / cfg.epsilon);
    }
    double r = std::ceil(bits);
    if (r < 1.0) r = 1.0;
    if (r > 1e6) r = 1e6;
    return static_cast<std::uint32_t>(r);
}

std::string epsilon_text(const RunConfig& cfg, std::size_t k, bool weighted_pipeline) {
    if (cfg.paper_epsilon) {
        std::ostringstream os;
        if (weighted_pipeline)
            os << k << "^-" << k << "^2";
        else
            os << "2^-" << k << "^1.5";
        return os.str();
    }
    // exact powers of two print symbolically; anything else as a decimal
    double e = cfg.epsilon;
    int exp = 0;
    double m = std::frexp(e, &exp);
    if (m == 0.5) {
        std::ostringstream os;
        os << "2^" << (exp - 1);
        return os.str();
    }
    std::ostringstream os;
    os.precision(17);
    os << e;
    return os.str();
}

void write_report(std::ostream& out, const RunReport& r, bool stats_only) {
    out << "kmatch-report v1\n";
    out << "command: " << r.command << '\n';
    if (!r.input.empty()) out << "input: " << r.input << '\n';
    out << "k: " << r.k << '\n';
    if (r.hash_failure) {
        out << "answer: hash-failure\n";
    } else if (r.found) {
        out << "answer: matching\n";
        if (!stats_only) {
            out << "edges:";
            for (const Edge& e : r.edges) out << ' ' << e.lo << '-' << e.hi;
            out << '\n';
        }
        if (r.weighted) out << "weight: " << r.total_weight << '\n';
    } else {
        out << "answer: no-k-matching\n";
    }
    out << "branch: " << branch_name(r.branch) << '\n';
    out << "mode: " << (r.deterministic ? "deterministic" : "randomized") << '\n';
    out << "seed: " << r.seed << '\n';
    out << "epsilon: " << r.epsilon << '\n';
    out << "injectivity-rounds: " << r.rounds << '\n';
    out << "hash-builds: " << r.hash_stats.builds << '\n';
    out << "hash-rebuilds: " << r.hash_stats.rebuilds << '\n';
    out << "membership: " << (r.deterministic ? "tree" : "hash") << '\n';
    out << "peak-workspace-words: " << r.peak_workspace_words << '\n';
    out << "full-passes: " << r.full_passes << '\n';
    out << "random-reads: " << r.random_reads << '\n';
    out << "wall-ms: " << r.wall_ms << '\n';
}

}  // namespace kmatch
