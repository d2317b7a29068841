#include <doctest.h>
#include <random>
#include <sstream>

#include "kmatch/generate.hpp"
#include "kmatch/graph.hpp"

using namespace kmatch;

namespace {

AdjacencyGraph load_str(const std::string& text, LoadOptions opts = {}) {
    std::istringstream in(text);
    return AdjacencyGraph::load_text(in, opts);
}

}  // namespace

TEST_CASE("smallest path graph") {
    auto g = load_str("adj 3 2 u\n0: 1\n1: 0 2\n2: 1\n");
    CHECK(g.vertex_count() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(g.degree(1) == 2);
    CHECK(g.degree(0) == 1);
}

TEST_CASE("single vertex, no edges") {
    auto g = load_str("adj 1 0 u\n0:\n");
    CHECK(g.vertex_count() == 1);
    CHECK(g.edge_count() == 0);
    CHECK(g.degree(0) == 0);
}

TEST_CASE("comments, blank lines, and out-of-order vertex lines") {
    auto g = load_str("# a comment\n\nadj 3 2 u\n2: 1\n0: 1  # trailing comment\n\n1: 0 2\n");
    CHECK(g.edge_count() == 2);
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(1, 2));
    CHECK_FALSE(g.has_edge(0, 2));
}

TEST_CASE("weighted parsing and weight lookup") {
    auto g = load_str("adj 3 2 w\n0: 1@5\n1: 0@5 2@-3\n2: 1@-3\n");
    CHECK(g.weighted());
    CHECK(g.find_edge_weight(0, 1) == 5);
    CHECK(g.find_edge_weight(2, 1) == -3);
}

TEST_CASE("malformed inputs are rejected") {
    CHECK_THROWS_AS(load_str("adj 2 1 u\n0: 0\n1:\n"), GraphFormatError);             // self-loop
    CHECK_THROWS_AS(load_str("adj 2 1 u\n0: 1\n1:\n"), GraphFormatError);             // asymmetric
    CHECK_THROWS_AS(load_str("adj 2 1 u\n0: 1\n"), GraphFormatError);                 // missing line
    CHECK_THROWS_AS(load_str("adj 2 1 u\n0: 1\n1: 0\n0: 1\n"), GraphFormatError);     // duplicate line
    CHECK_THROWS_AS(load_str("adj 2 1 u\n0: 2\n1: 0\n"), GraphFormatError);           // id out of range
    CHECK_THROWS_AS(load_str("adj 2 1 w\n0: 1@4\n1: 0@5\n"), GraphFormatError);       // weight mismatch
    CHECK_THROWS_AS(load_str("adj 2 2 u\n0: 1 1\n1: 0 0\n"), GraphFormatError);       // parallel edge
    CHECK_THROWS_AS(load_str("adj 2 5 u\n0: 1\n1: 0\n"), GraphFormatError);           // m mismatch
    CHECK_THROWS_AS(load_str("bogus\n"), GraphFormatError);                           // no header
    CHECK_THROWS_AS(load_str("adj 2 1 w\n0: 1\n1: 0\n"), GraphFormatError);           // missing weight
}

TEST_CASE("degree sum equals 2m on a random graph") {
    auto g = gen_erdos_renyi(200, 0.05, 42);
    std::size_t sum = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) sum += g.degree(v);
    CHECK(sum == 2 * g.edge_count());
}

TEST_CASE("text round-trip is identity on a large random graph") {
    auto g = gen_erdos_renyi(10000, 0.0008, 7, WeightRange{-50, 50});
    std::ostringstream dump1;
    g.dump_text(dump1);
    auto g2 = load_str(dump1.str());
    std::ostringstream dump2;
    g2.dump_text(dump2);
    CHECK(dump1.str() == dump2.str());
    CHECK(g.checksum() == g2.checksum());
}

TEST_CASE("binary round-trip matches the text form") {
    auto g = gen_erdos_renyi(500, 0.01, 3, WeightRange{1, 9});
    std::ostringstream bin(std::ios::binary);
    g.dump_binary(bin);
    std::istringstream in(bin.str(), std::ios::binary);
    auto g2 = AdjacencyGraph::load_binary(in);
    CHECK(g.checksum() == g2.checksum());
}

TEST_CASE("scan visits every slot once per direction and charges one pass") {
    auto g = load_str("adj 3 3 u\n0: 1 2\n1: 0 2\n2: 0 1\n");  // triangle
    ResourceMeter meter;
    std::size_t visits = 0;
    g.scan(meter, [&](VertexId, VertexId, Weight) {
        ++visits;
        return true;
    });
    CHECK(visits == 6);
    CHECK(meter.full_passes() == 1);

    // deterministic order: two scans see identical sequences
    std::vector<std::pair<VertexId, VertexId>> seq1, seq2;
    g.scan(meter, [&](VertexId v, VertexId w, Weight) {
        seq1.push_back({v, w});
        return true;
    });
    g.scan(meter, [&](VertexId v, VertexId w, Weight) {
        seq2.push_back({v, w});
        return true;
    });
    CHECK(seq1 == seq2);
    CHECK(meter.full_passes() == 3);
}

TEST_CASE("scan early exit still charges the pass") {
    auto g = load_str("adj 3 3 u\n0: 1 2\n1: 0 2\n2: 0 1\n");
    ResourceMeter meter;
    std::size_t visits = 0;
    g.scan(meter, [&](VertexId, VertexId, Weight) {
        ++visits;
        return visits < 2;
    });
    CHECK(visits == 2);
    CHECK(meter.full_passes() == 1);
}

TEST_CASE("generators are deterministic under a seed") {
    auto a = gen_planted_large(1000, 5, 64, 11);
    auto b = gen_planted_large(1000, 5, 64, 11);
    CHECK(a.checksum() == b.checksum());
    std::size_t large = 0;
    for (VertexId v = 0; v < a.vertex_count(); ++v)
        if (a.degree(v) >= 64) ++large;
    CHECK(large == 5);

    auto d = gen_disjoint_edges(10, 0);
    CHECK(d.vertex_count() == 20);
    CHECK(d.edge_count() == 10);
    for (VertexId v = 0; v < d.vertex_count(); ++v) CHECK(d.degree(v) == 1);
}

TEST_CASE("meter workspace bookkeeping") {
    ResourceMeter meter;
    {
        Workspace<std::uint64_t> a(meter, 100);
        CHECK(meter.current_words() == 100);
        {
            Workspace<std::uint32_t> b(meter, 100);  // 4-byte entries: 50 words
            CHECK(meter.current_words() == 150);
        }
        CHECK(meter.current_words() == 100);
        CHECK(meter.peak_workspace_words() == 150);
    }
    CHECK(meter.current_words() == 0);
    CHECK(meter.peak_workspace_words() == 150);  // peak is monotone
}
