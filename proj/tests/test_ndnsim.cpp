#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "tsub/ndnsim.hpp"

using namespace tsub;
using namespace tsub::ndnsim;

namespace {

Topology topo_from(const std::string& text) {
    std::istringstream is(text);
    return parse_topology(is);
}

const char* kLine3 = R"(
node c0 consumer
node e0 edge
node p0 producer
link c0 e0 cost=1 lat_us=1000 bw_bps=10000000
link e0 p0 cost=1 lat_us=2000 bw_bps=100000000
)";

const char* kSharedEdge = R"(
node c0 consumer
node c1 consumer
node e0 edge
node r0 intermediate
node p0 producer
link c0 e0 cost=1 lat_us=1000 bw_bps=10000000
link c1 e0 cost=1 lat_us=1000 bw_bps=10000000
link e0 r0 cost=1 lat_us=2000 bw_bps=100000000
link r0 p0 cost=1 lat_us=2000 bw_bps=100000000
)";

uint64_t node_stat(const Metrics& m, const std::string& id,
                   uint64_t NodeMetrics::*field) {
    for (const auto& n : m.nodes)
        if (n.id == id) return n.*field;
    throw std::runtime_error("no node " + id);
}

}  // namespace

TEST_CASE("topology parser accepts the 3-node line and routes it") {
    Topology t = topo_from(kLine3);
    REQUIRE(t.nodes.size() == 3);
    REQUIRE(t.links.size() == 2);
    auto next = shortest_path_next_hop(t, t.require("p0"));
    REQUIRE(next[t.require("c0")] == 0);  // via the access link
    REQUIRE(next[t.require("e0")] == 1);
}

TEST_CASE("topology parser rejects malformed input") {
    REQUIRE_THROWS_AS(topo_from("node a consumer\nnode a edge\n"), ParseError);
    REQUIRE_THROWS_AS(topo_from("node a wizard\n"), ParseError);
    REQUIRE_THROWS_AS(topo_from("link a b\n"), ParseError);
    REQUIRE_THROWS_AS(topo_from(R"(
node a intermediate
node b intermediate
link a b cost=1
link b a cost=2
)"),
                      ParseError);  // duplicate link either direction
    REQUIRE_THROWS_AS(topo_from(R"(
node a intermediate
node b intermediate
node c intermediate
link a b cost=1
)"),
                      DisconnectedGraph);
    // consumer with two attachments
    REQUIRE_THROWS_AS(topo_from(R"(
node c0 consumer
node e0 edge
node e1 edge
link c0 e0 cost=1
link c0 e1 cost=1
link e0 e1 cost=1
)"),
                      ParseError);
    // consumer attached to an intermediate router
    REQUIRE_THROWS_AS(topo_from(R"(
node c0 consumer
node r0 intermediate
link c0 r0 cost=1
)"),
                      ParseError);
}

TEST_CASE("bundled testbed file loads with 37 nodes and 97 links") {
    Topology t = load_topology(std::string(TSUB_DATA_DIR) + "/ndn-testbed.txt");
    REQUIRE(t.nodes.size() == 37);
    REQUIRE(t.links.size() == 97);
    int consumers = 0, edges = 0, producers = 0;
    for (const auto& n : t.nodes) {
        if (n.role == Role::consumer) ++consumers;
        if (n.role == Role::edge) ++edges;
        if (n.role == Role::producer) ++producers;
    }
    REQUIRE(consumers == 5);
    REQUIRE(edges == 5);
    REQUIRE(producers == 1);
}

TEST_CASE("cold single-consumer fetch pulls every segment from the producer once") {
    Scenario s;
    s.consumers = 1;
    s.segments = 40;
    Simulation sim(topo_from(kLine3), s, 1);
    Metrics m = sim.run();
    REQUIRE(m.consumers.size() == 1);
    REQUIRE(m.consumers[0].interests_sent == 40);  // no loss: equality
    REQUIRE(m.consumers[0].data_received == 40);
    REQUIRE(m.producer_data_out == 40);
    REQUIRE(m.consumers[0].goodput_bps > 0);
    // goodput definition: file size over transfer time
    double expect = 40 * 8192 * 8.0 / m.consumers[0].transfer_time_s;
    REQUIRE(m.consumers[0].goodput_bps == Catch::Approx(expect));
}

TEST_CASE("a staggered second consumer is served from caches") {
    Scenario s;
    s.consumers = 2;
    s.segments = 40;
    s.stagger_us = 2'000'000;  // second starts after the first finished
    Simulation sim(topo_from(kSharedEdge), s, 2);
    Metrics m = sim.run();
    REQUIRE(m.producer_data_out == 40);  // nothing fetched twice upstream
    uint64_t hits = node_stat(m, "e0", &NodeMetrics::cs_hits);
    REQUIRE(hits >= 36);  // >= 90% of the second consumer's interests
    REQUIRE(m.consumers[1].transfer_time_s < m.consumers[0].transfer_time_s);
}

TEST_CASE("concurrent consumers aggregate in the shared PIT") {
    Scenario s;
    s.consumers = 2;
    s.segments = 40;
    s.stagger_us = 0;
    Simulation sim(topo_from(kSharedEdge), s, 3);
    Metrics m = sim.run();
    // both fetch the full file, but the producer serves each segment once
    REQUIRE(m.consumers[0].data_received == 40);
    REQUIRE(m.consumers[1].data_received == 40);
    REQUIRE(m.producer_data_out < 80);
    uint64_t agg = node_stat(m, "e0", &NodeMetrics::pit_aggregated) +
                   node_stat(m, "e0", &NodeMetrics::cs_hits);
    REQUIRE(agg > 0);
    // upstream interest count bounded by distinct names
    REQUIRE(node_stat(m, "e0", &NodeMetrics::interests_out) <= 40);
}

TEST_CASE("conservation: every data send is backed by a PIT face or CS hit") {
    Scenario s;
    s.consumers = 2;
    s.segments = 30;
    Simulation sim(topo_from(kSharedEdge), s, 4);
    Metrics m = sim.run();
    for (const auto& n : m.nodes) {
        if (n.role == "edge" || n.role == "intermediate")
            REQUIRE(n.data_out <= n.pit_inserts + n.pit_aggregated + n.cs_hits);
    }
}

TEST_CASE("disabling the content store never reduces producer load") {
    Scenario with_cs;
    with_cs.consumers = 2;
    with_cs.segments = 30;
    with_cs.stagger_us = 1'500'000;
    Scenario no_cs = with_cs;
    no_cs.cs_capacity = 0;
    Metrics a = Simulation(topo_from(kSharedEdge), with_cs, 5).run();
    Metrics b = Simulation(topo_from(kSharedEdge), no_cs, 5).run();
    REQUIRE(a.producer_data_out <= b.producer_data_out);
    REQUIRE(b.producer_data_out == 60);  // every segment refetched
}

TEST_CASE("loss triggers retransmissions; interests exceed segments") {
    Scenario s;
    s.consumers = 1;
    s.segments = 30;
    s.loss_rate = 0.2;
    s.retransmit_us = 200'000;
    Simulation sim(topo_from(kLine3), s, 6);
    Metrics m = sim.run();
    REQUIRE(m.consumers[0].data_received == 30);
    REQUIRE(m.consumers[0].interests_sent > 30);
}

TEST_CASE("data returning after PIT expiry is dropped, not delivered") {
    Scenario s;
    s.consumers = 1;
    s.segments = 2;
    s.pit_lifetime_us = 3000;  // below the path round-trip time
    s.retransmit_us = 20'000;
    Simulation sim(topo_from(kLine3), s, 7);
    REQUIRE_THROWS_AS(sim.run(), Unsatisfiable);
}

TEST_CASE("auth scenario verifies at the edge and still delivers") {
    Scenario s;
    s.consumers = 2;
    s.segments = 12;
    s.auth = true;
    Simulation sim(topo_from(kSharedEdge), s, 8);
    Metrics m = sim.run();
    REQUIRE(m.total_segments == 13);  // +1 ciphertext header segment
    REQUIRE(m.consumers[0].data_received == 13);
    for (const auto& n : m.nodes) {
        REQUIRE(n.drops_bad_sig == 0);
        REQUIRE(n.drops_stale == 0);
        REQUIRE(n.drops_unsigned == 0);
    }
    // fetched ciphertext decrypts to the published plaintext
    Ciphertext ct = *sim.ciphertext();
    ct.enc_payload = sim.reassemble(0);
    REQUIRE(decrypt(sim.consumer_key(0), sim.public_params(), ct, sim.rekey()) ==
            sim.plaintext());
}

TEST_CASE("revocation scenario adds one segment and still decrypts") {
    Scenario s;
    s.consumers = 1;
    s.segments = 10;
    s.auth = true;
    s.revocation = true;
    Simulation sim(topo_from(kLine3), s, 9);
    Metrics m = sim.run();
    REQUIRE(m.total_segments == 12);  // header + revocation segments
    Ciphertext ct = *sim.ciphertext();
    ct.enc_payload = sim.reassemble(0);
    REQUIRE(decrypt(sim.consumer_key(0), sim.public_params(), ct, sim.rekey()) ==
            sim.plaintext());
    // without the rekey secret the content key is wrong
    REQUIRE_THROWS_AS(decrypt(sim.consumer_key(0), sim.public_params(), ct), AeadFailure);
}

TEST_CASE("unsigned interests are dropped at the edge when auth is on") {
    Scenario s;
    s.consumers = 1;
    s.segments = 5;
    s.auth = true;
    Simulation sim(topo_from(kLine3), s, 10);
    sim.inject_interest(0, {"/com/test/m1w1d7/video.bin/chunk_0", 1234, {}}, 0);
    Metrics m = sim.run();
    REQUIRE(node_stat(m, "e0", &NodeMetrics::drops_unsigned) == 1);

    Simulation sim2(topo_from(kLine3), s, 10);
    sim2.inject_interest(0, {"/com/test/m1w1d7/video.bin/chunk_0", 1234, Bytes{1, 2, 3}}, 0);
    Metrics m2 = sim2.run();
    REQUIRE(node_stat(m2, "e0", &NodeMetrics::drops_malformed) == 1);
}

TEST_CASE("stale signatures are dropped at the edge and never forwarded") {
    Scenario s;
    s.consumers = 1;
    s.segments = 4;
    s.auth = true;
    Simulation sim(topo_from(kLine3), s, 11);
    // a well-formed signature whose timestamp is far behind the edge clock
    std::string name = "/com/test/m1w1d7/video.bin/chunk_0";
    Drbg srng(999);
    auto sig = sign_interest(sim.consumer_key(0), sim.public_params(), name, 0,
                             path_from_leaf(PolicyTree(2023).parse_label("m1w1d7"),
                                            PolicyTree(2023)),
                             srng);
    // injected at sim-time 60 s; delta_t is 10 s
    sim.inject_interest(0, {name, 555, sig.to_bytes()}, 60'000'000);
    Metrics m = sim.run();
    REQUIRE(node_stat(m, "e0", &NodeMetrics::drops_stale) == 1);
    // the stale interest never reached the producer as an extra request
    REQUIRE(m.producer_data_out == m.total_segments);
}

TEST_CASE("per-consumer producer load shrinks as consumers multiply") {
    Topology t = load_topology(std::string(TSUB_DATA_DIR) + "/ndn-testbed-125c.txt");
    Scenario s;
    s.segments = 60;
    double prev = 1e18;
    for (int n : {5, 25, 125}) {
        s.consumers = n;
        Metrics m = Simulation(t, s, 77).run();
        double per_consumer = static_cast<double>(m.producer_data_out) / n;
        REQUIRE(per_consumer < prev);
        prev = per_consumer;
        for (const auto& c : m.consumers) REQUIRE(c.data_received == 60);
    }
}

TEST_CASE("identical seeds reproduce byte-identical metrics") {
    Scenario s;
    s.consumers = 2;
    s.segments = 25;
    s.auth = true;
    Metrics a = Simulation(topo_from(kSharedEdge), s, 42).run();
    Metrics b = Simulation(topo_from(kSharedEdge), s, 42).run();
    REQUIRE(a.consumers_csv() == b.consumers_csv());
    REQUIRE(a.nodes_csv() == b.nodes_csv());

    // under loss the event schedule is seed-dependent
    s.loss_rate = 0.1;
    s.retransmit_us = 150'000;
    Metrics c = Simulation(topo_from(kSharedEdge), s, 42).run();
    Metrics d = Simulation(topo_from(kSharedEdge), s, 43).run();
    REQUIRE_FALSE(c.consumers_csv() == d.consumers_csv());
}
