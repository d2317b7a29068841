#include "kmatch/graph.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace kmatch {

namespace {

constexpr std::uint64_t kBinaryMagic = 0x4b4d415447525048ull;  // "KMATGRPH"
constexpr std::uint64_t kBinaryVersion = 1;
constexpr std::uint64_t kVerifyAutoLimit = 10'000'000;  // words

[[noreturn]] void fail(const std::string& msg) { throw GraphFormatError(msg); }

[[noreturn]] void fail_line(std::size_t lineno, const std::string& msg) {
    fail("line " + std::to_string(lineno) + ": " + msg);
}

bool parse_u64(std::string_view tok, std::uint64_t& out) {
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && p == tok.data() + tok.size();
}

bool parse_i64(std::string_view tok, std::int64_t& out) {
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && p == tok.data() + tok.size();
}

void write_words(std::ostream& out, std::span<const std::uint64_t> words) {
    for (std::uint64_t w : words) {
        std::array<unsigned char, 8> b;
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((w >> (8 * i)) & 0xff);
        out.write(reinterpret_cast<const char*>(b.data()), 8);
    }
}

std::uint64_t read_word(std::istream& in) {
    std::array<unsigned char, 8> b;
    in.read(reinterpret_cast<char*>(b.data()), 8);
    if (!in) fail("binary input truncated");
    std::uint64_t w = 0;
    for (int i = 0; i < 8; ++i) w |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return w;
}

}  // namespace

AdjacencyGraph AdjacencyGraph::load_text(std::istream& in, const LoadOptions& opts) {
    AdjacencyGraph g;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    std::uint64_t declared_m = 0;
    std::vector<bool> seen;
    // Per-vertex lists buffered as (vertex, first, count) over flat arrays so
    // out-of-order vertex lines are accepted.
    std::vector<std::vector<VertexId>> adj;
    std::vector<std::vector<Weight>> wts;

    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv(line);
        if (auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
        while (!sv.empty() && (sv.back() == ' ' || sv.back() == '\t' || sv.back() == '\r')) sv.remove_suffix(1);
        while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t')) sv.remove_prefix(1);
        if (sv.empty()) continue;

        std::istringstream toks{std::string(sv)};
        if (!have_header) {
            std::string tag, flag;
            std::uint64_t n, m;
            if (!(toks >> tag >> n >> m >> flag) || tag != "adj" || (flag != "u" && flag != "w"))
                fail_line(lineno, "expected header 'adj <n> <m> u|w'");
            std::string extra;
            if (toks >> extra) fail_line(lineno, "trailing tokens after header");
            g.n_ = n;
            declared_m = m;
            g.weighted_ = (flag == "w");
            seen.assign(n, false);
            adj.resize(n);
            if (g.weighted_) wts.resize(n);
            have_header = true;
            continue;
        }

        auto colon = sv.find(':');
        if (colon == std::string_view::npos) fail_line(lineno, "missing ':' after vertex id");
        std::uint64_t v64;
        if (!parse_u64(sv.substr(0, colon), v64)) fail_line(lineno, "malformed vertex id");
        if (v64 >= g.n_) fail_line(lineno, "vertex id " + std::to_string(v64) + " out of range [0, n)");
        auto v = static_cast<VertexId>(v64);
        if (seen[v]) fail_line(lineno, "duplicate line for vertex " + std::to_string(v64));
        seen[v] = true;

        std::istringstream rest{std::string(sv.substr(colon + 1))};
        std::string tok;
        while (rest >> tok) {
            std::string_view t(tok);
            std::uint64_t w64;
            if (g.weighted_) {
                auto at = t.find('@');
                if (at == std::string_view::npos) fail_line(lineno, "weighted entry must be '<w>@<wt>'");
                std::int64_t wt;
                if (!parse_u64(t.substr(0, at), w64) || !parse_i64(t.substr(at + 1), wt))
                    fail_line(lineno, "malformed weighted entry '" + tok + "'");
                if (w64 >= g.n_) fail_line(lineno, "neighbor id out of range");
                adj[v].push_back(static_cast<VertexId>(w64));
                wts[v].push_back(wt);
            } else {
                if (!parse_u64(t, w64)) fail_line(lineno, "malformed neighbor '" + tok + "'");
                if (w64 >= g.n_) fail_line(lineno, "neighbor id out of range");
                adj[v].push_back(static_cast<VertexId>(w64));
            }
        }
    }
    if (!have_header) fail("empty input: missing 'adj' header");
    for (std::size_t v = 0; v < g.n_; ++v) {
        if (!seen[v]) fail("missing adjacency line for vertex " + std::to_string(v));
    }

    g.offsets_.assign(g.n_ + 1, 0);
    for (std::size_t v = 0; v < g.n_; ++v) g.offsets_[v + 1] = g.offsets_[v] + adj[v].size();
    g.neighbors_.reserve(g.offsets_[g.n_]);
    for (auto& list : adj) g.neighbors_.insert(g.neighbors_.end(), list.begin(), list.end());
    if (g.weighted_) {
        g.weights_.reserve(g.offsets_[g.n_]);
        for (auto& list : wts) g.weights_.insert(g.weights_.end(), list.begin(), list.end());
    }
    g.finalize(opts, declared_m);
    return g;
}

AdjacencyGraph AdjacencyGraph::load_binary(std::istream& in, const LoadOptions& opts) {
    if (read_word(in) != kBinaryMagic) fail("bad magic (not a binary graph file)");
    if (read_word(in) != kBinaryVersion) fail("unsupported binary version");
    std::uint64_t flags = read_word(in);
    AdjacencyGraph g;
    g.weighted_ = (flags & 1) != 0;
    g.n_ = read_word(in);
    std::uint64_t declared_m = read_word(in);
    g.offsets_.resize(g.n_ + 1);
    for (auto& o : g.offsets_) o = read_word(in);
    if (g.offsets_[0] != 0) fail("offset table must start at 0");
    for (std::size_t v = 0; v < g.n_; ++v) {
        if (g.offsets_[v + 1] < g.offsets_[v]) fail("offset table not nondecreasing");
    }
    std::uint64_t slots = g.offsets_[g.n_];
    g.neighbors_.resize(slots);
    for (auto& w : g.neighbors_) {
        std::uint64_t x = read_word(in);
        if (x >= g.n_) fail("neighbor id out of range");
        w = static_cast<VertexId>(x);
    }
    if (g.weighted_) {
        g.weights_.resize(slots);
        for (auto& w : g.weights_) w = static_cast<Weight>(read_word(in));
    }
    g.finalize(opts, declared_m);
    return g;
}

AdjacencyGraph AdjacencyGraph::load_file(const std::string& path, const LoadOptions& opts) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open '" + path + "'");
    // Sniff the magic so callers don't have to say which format a file is in.
    std::array<char, 8> head{};
    in.read(head.data(), 8);
    std::uint64_t magic = 0;
    std::memcpy(&magic, head.data(), std::min<std::streamsize>(in.gcount(), 8));
    in.clear();
    in.seekg(0);
    if (magic == kBinaryMagic) return load_binary(in, opts);
    return load_text(in, opts);
}

AdjacencyGraph AdjacencyGraph::from_edges(std::size_t n,
                                          std::span<const std::pair<VertexId, VertexId>> edges,
                                          std::span<const Weight> weights) {
    AdjacencyGraph g;
    g.n_ = n;
    g.weighted_ = !weights.empty();
    if (g.weighted_ && weights.size() != edges.size())
        fail("from_edges: weights must match edges one to one");
    g.offsets_.assign(n + 1, 0);
    for (auto [u, v] : edges) {
        if (u >= n || v >= n) fail("from_edges: endpoint out of range");
        ++g.offsets_[u + 1];
        ++g.offsets_[v + 1];
    }
    for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] += g.offsets_[v];
    std::vector<std::uint64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    g.neighbors_.resize(g.offsets_[n]);
    if (g.weighted_) g.weights_.resize(g.offsets_[n]);
    // Fill each directed slot in (vertex, neighbor) sorted order so lists
    // come out sorted and construction is deterministic.
    std::vector<std::tuple<VertexId, VertexId, std::size_t>> slots;
    slots.reserve(edges.size() * 2);
    for (std::size_t ei = 0; ei < edges.size(); ++ei) {
        slots.emplace_back(edges[ei].first, edges[ei].second, ei);
        slots.emplace_back(edges[ei].second, edges[ei].first, ei);
    }
    std::sort(slots.begin(), slots.end(), [](const auto& a, const auto& b) {
        return std::get<0>(a) < std::get<0>(b) ||
               (std::get<0>(a) == std::get<0>(b) && std::get<1>(a) < std::get<1>(b));
    });
    for (auto& [from, to, ei] : slots) {
        g.neighbors_[cursor[from]] = to;
        if (g.weighted_) g.weights_[cursor[from]] = weights[ei];
        ++cursor[from];
    }
    g.finalize(LoadOptions{InputVerify::kOn}, edges.size());
    return g;
}

void AdjacencyGraph::finalize(const LoadOptions& opts, std::uint64_t declared_m) {
    std::uint64_t slots = offsets_[n_];
    if (slots % 2 != 0) fail("total adjacency entries must be even (each edge listed twice)");
    m_ = slots / 2;
    if (m_ != declared_m)
        fail("header declares m=" + std::to_string(declared_m) + " but lists contain " +
             std::to_string(m_) + " undirected edges");
    bool verify = opts.verify == InputVerify::kOn ||
                  (opts.verify == InputVerify::kAuto && size_words() < kVerifyAutoLimit);
    if (verify) validate();
}

void AdjacencyGraph::validate() const {
    // Directed slots sorted as (min, max, dir, weight); each undirected edge
    // must appear exactly once per direction with equal weights.
    struct Slot {
        VertexId lo, hi;
        bool rev;
        Weight wt;
    };
    std::vector<Slot> slots;
    slots.reserve(2 * m_);
    for (VertexId v = 0; v < n_; ++v) {
        auto ns = neighbors(v);
        for (std::size_t i = 0; i < ns.size(); ++i) {
            VertexId w = ns[i];
            if (w == v) fail("self-loop at vertex " + std::to_string(v));
            if (w >= n_) fail("neighbor id out of range");
            slots.push_back({std::min(v, w), std::max(v, w), v > w, weighted_ ? weights_[offsets_[v] + i] : 0});
        }
    }
    std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) {
        return std::tie(a.lo, a.hi, a.rev) < std::tie(b.lo, b.hi, b.rev);
    });
    for (std::size_t i = 0; i + 1 < slots.size(); i += 2) {
        const Slot& a = slots[i];
        const Slot& b = slots[i + 1];
        if (a.lo != b.lo || a.hi != b.hi || a.rev || !b.rev) {
            if (a.lo == b.lo && a.hi == b.hi && a.rev == b.rev)
                fail("parallel edge [" + std::to_string(a.lo) + "," + std::to_string(a.hi) + "]");
            fail("asymmetric adjacency at edge [" + std::to_string(a.lo) + "," + std::to_string(a.hi) + "]");
        }
        if (weighted_ && a.wt != b.wt)
            fail("weight mismatch between the two copies of edge [" + std::to_string(a.lo) + "," +
                 std::to_string(a.hi) + "]");
    }
}

std::optional<Weight> AdjacencyGraph::find_edge_weight(VertexId v, VertexId w) const {
    auto ns = neighbors(v);
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (ns[i] == w) return weighted_ ? weights_[offsets_[v] + i] : Weight{0};
    }
    return std::nullopt;
}

bool AdjacencyGraph::has_edge(VertexId v, VertexId w) const {
    return find_edge_weight(v, w).has_value();
}

void AdjacencyGraph::dump_text(std::ostream& out) const {
    out << "adj " << n_ << ' ' << m_ << ' ' << (weighted_ ? 'w' : 'u') << '\n';
    for (VertexId v = 0; v < n_; ++v) {
        out << v << ':';
        auto ns = neighbors(v);
        for (std::size_t i = 0; i < ns.size(); ++i) {
            out << ' ' << ns[i];
            if (weighted_) out << '@' << weights_[offsets_[v] + i];
        }
        out << '\n';
    }
}

void AdjacencyGraph::dump_binary(std::ostream& out) const {
    std::vector<std::uint64_t> header = {kBinaryMagic, kBinaryVersion, weighted_ ? 1ull : 0ull,
                                         static_cast<std::uint64_t>(n_), static_cast<std::uint64_t>(m_)};
    write_words(out, header);
    write_words(out, offsets_);
    std::vector<std::uint64_t> block(neighbors_.begin(), neighbors_.end());
    write_words(out, block);
    if (weighted_) {
        block.assign(weights_.size(), 0);
        for (std::size_t i = 0; i < weights_.size(); ++i) block[i] = static_cast<std::uint64_t>(weights_[i]);
        write_words(out, block);
    }
}

std::uint64_t AdjacencyGraph::checksum() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(n_);
    mix(m_);
    mix(weighted_ ? 1 : 0);
    for (auto o : offsets_) mix(o);
    for (auto w : neighbors_) mix(w);
    for (auto w : weights_) mix(static_cast<std::uint64_t>(w));
    return h;
}

}  // namespace kmatch
