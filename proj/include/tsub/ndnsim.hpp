#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <list>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "tsub/bytes.hpp"
#include "tsub/errors.hpp"
#include "tsub/revocation.hpp"
#include "tsub/rng.hpp"
#include "tsub/scheme.hpp"

// Deterministic discrete-event simulator of an NDN forwarding plane:
// consumers with a fixed interest window, edge routers that verify interest
// signatures before admitting them, intermediate routers with PIT/FIB/CS,
// and one producer. The clock is integer microseconds; identical
// (topology, scenario, seed) inputs give byte-identical metrics.
namespace tsub::ndnsim {

enum class Role : uint8_t { consumer, edge, intermediate, producer };

inline const char* role_name(Role r) {
    switch (r) {
        case Role::consumer: return "consumer";
        case Role::edge: return "edge";
        case Role::intermediate: return "intermediate";
        default: return "producer";
    }
}

struct TopoNode {
    std::string id;
    Role role;
};

struct TopoLink {
    int a = 0;
    int b = 0;
    int cost = 1;
    uint64_t lat_us = 1000;
    uint64_t bw_bps = 100'000'000;
};

struct Topology {
    std::vector<TopoNode> nodes;
    std::vector<TopoLink> links;
    std::unordered_map<std::string, int> index;

    int require(const std::string& id) const {
        auto it = index.find(id);
        if (it == index.end()) throw ParseError("unknown node in topology: " + id);
        return it->second;
    }
};

inline Topology parse_topology(std::istream& in) {
    Topology topo;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw ParseError("topology line " + std::to_string(lineno) + ": " + msg);
    };
    std::map<std::pair<int, int>, bool> seen_links;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;
        if (kind == "node") {
            std::string id, role;
            if (!(ls >> id >> role)) fail("node needs: node <id> <role>");
            if (topo.index.count(id)) fail("duplicate node " + id);
            Role r;
            if (role == "consumer") r = Role::consumer;
            else if (role == "edge") r = Role::edge;
            else if (role == "intermediate") r = Role::intermediate;
            else if (role == "producer") r = Role::producer;
            else { fail("unknown role " + role); return topo; }
            topo.index[id] = static_cast<int>(topo.nodes.size());
            topo.nodes.push_back({id, r});
        } else if (kind == "link") {
            std::string a, b, kv;
            if (!(ls >> a >> b)) fail("link needs: link <a> <b> ...");
            if (!topo.index.count(a)) fail("unknown node " + a);
            if (!topo.index.count(b)) fail("unknown node " + b);
            TopoLink l;
            l.a = topo.index[a];
            l.b = topo.index[b];
            if (l.a == l.b) fail("self-link on " + a);
            auto key = std::minmax(l.a, l.b);
            if (seen_links.count(key)) fail("duplicate link " + a + " " + b);
            seen_links[{key.first, key.second}] = true;
            while (ls >> kv) {
                auto eq = kv.find('=');
                if (eq == std::string::npos) fail("link option must be key=value: " + kv);
                std::string k = kv.substr(0, eq);
                long long v = 0;
                try {
                    v = std::stoll(kv.substr(eq + 1));
                } catch (...) { fail("bad integer in " + kv); }
                if (v <= 0) fail("link option must be positive: " + kv);
                if (k == "cost") l.cost = static_cast<int>(v);
                else if (k == "lat_us") l.lat_us = static_cast<uint64_t>(v);
                else if (k == "bw_bps") l.bw_bps = static_cast<uint64_t>(v);
                else fail("unknown link option " + k);
            }
            topo.links.push_back(l);
        } else {
            fail("unknown directive " + kind);
        }
    }
    if (topo.nodes.empty()) throw ParseError("topology has no nodes");

    // connectivity
    std::vector<std::vector<int>> adj(topo.nodes.size());
    for (const auto& l : topo.links) {
        adj[l.a].push_back(l.b);
        adj[l.b].push_back(l.a);
    }
    std::vector<bool> seen(topo.nodes.size(), false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        int n = stack.back();
        stack.pop_back();
        for (int m : adj[n])
            if (!seen[m]) { seen[m] = true; stack.push_back(m); }
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
        throw DisconnectedGraph("topology is not connected");

    // each consumer hangs off exactly one edge router
    for (size_t i = 0; i < topo.nodes.size(); ++i) {
        if (topo.nodes[i].role != Role::consumer) continue;
        int degree = 0, peer = -1;
        for (const auto& l : topo.links) {
            if (l.a == static_cast<int>(i)) { ++degree; peer = l.b; }
            if (l.b == static_cast<int>(i)) { ++degree; peer = l.a; }
        }
        if (degree != 1 || topo.nodes[peer].role != Role::edge)
            throw ParseError("consumer " + topo.nodes[i].id +
                             " must attach through exactly one edge router");
    }
    return topo;
}

inline Topology load_topology(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open topology file: " + path);
    return parse_topology(in);
}

// next-hop face index per node toward `target`, shortest path over link
// costs, ties broken by lexicographically smaller upstream node id
inline std::vector<int> shortest_path_next_hop(const Topology& topo, int target) {
    const size_t n = topo.nodes.size();
    std::vector<int64_t> dist(n, INT64_MAX);
    std::vector<int> via_link(n, -1);
    using Entry = std::pair<int64_t, int>;
    auto cmp = [&](const Entry& a, const Entry& b) {
        if (a.first != b.first) return a.first > b.first;
        return topo.nodes[a.second].id > topo.nodes[b.second].id;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> pq(cmp);
    dist[target] = 0;
    pq.push({0, target});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (size_t li = 0; li < topo.links.size(); ++li) {
            const auto& l = topo.links[li];
            if (l.a != u && l.b != u) continue;
            int v = l.a == u ? l.b : l.a;
            int64_t nd = d + l.cost;
            bool better = nd < dist[v];
            if (nd == dist[v] && via_link[v] >= 0) {
                const auto& cur = topo.links[via_link[v]];
                int cur_up = cur.a == v ? cur.b : cur.a;
                better = topo.nodes[u].id < topo.nodes[cur_up].id;
            }
            if (better) {
                dist[v] = nd;
                via_link[v] = static_cast<int>(li);
                pq.push({nd, v});
            }
        }
    }
    for (size_t i = 0; i < n; ++i)
        if (i != static_cast<size_t>(target) && via_link[i] < 0)
            throw DisconnectedGraph("no route from " + topo.nodes[i].id);
    return via_link;
}

struct Scenario {
    int consumers = 1;
    int segments = 500;
    size_t segment_size = 8192;
    bool auth = false;
    bool revocation = false;
    uint64_t stagger_us = 0;
    int window = 64;
    uint64_t pit_lifetime_us = 4'000'000;
    uint64_t retransmit_us = 4'000'000;
    size_t cs_capacity = 10'000;
    double loss_rate = 0.0;
    uint64_t verify_service_us = 1700;  // edge signature check
    uint64_t sign_service_us = 1000;    // consumer signing
    std::string prefix = "/com/test";
    std::string file = "video.bin";
    int year = 2023;
    Date pub_date{2023, 1, 7};
    uint64_t delta_t = 10;  // seconds
};

struct ConsumerMetrics {
    std::string id;
    double transfer_time_s = 0;
    double goodput_bps = 0;
    uint64_t interests_sent = 0;
    uint64_t data_received = 0;
};

struct NodeMetrics {
    std::string id;
    std::string role;
    uint64_t interests_in = 0;
    uint64_t interests_out = 0;
    uint64_t data_in = 0;
    uint64_t data_out = 0;
    uint64_t cs_hits = 0;
    uint64_t pit_aggregated = 0;
    uint64_t pit_inserts = 0;
    uint64_t drops_unsigned = 0;
    uint64_t drops_stale = 0;
    uint64_t drops_wrong_node = 0;
    uint64_t drops_bad_sig = 0;
    uint64_t drops_malformed = 0;
    uint64_t drops_unsolicited = 0;
};

struct Metrics {
    std::vector<ConsumerMetrics> consumers;
    std::vector<NodeMetrics> nodes;
    uint64_t total_segments = 0;
    uint64_t producer_data_out = 0;
    double mean_transfer_time_s = 0;
    double mean_goodput_bps = 0;

    std::string consumers_csv() const {
        std::ostringstream os;
        os << "consumer,transfer_time_s,goodput_bps,interests_sent,data_received\n";
        char buf[64];
        for (const auto& c : consumers) {
            std::snprintf(buf, sizeof buf, "%.6f", c.transfer_time_s);
            os << c.id << "," << buf << ",";
            std::snprintf(buf, sizeof buf, "%.3f", c.goodput_bps);
            os << buf << "," << c.interests_sent << "," << c.data_received << "\n";
        }
        return os.str();
    }

    std::string nodes_csv() const {
        std::ostringstream os;
        os << "node,role,interests_in,interests_out,data_in,data_out,cs_hits,pit_aggregated,"
              "drops_unsigned,drops_stale,drops_wrong_node,drops_bad_sig,drops_malformed,"
              "drops_unsolicited\n";
        for (const auto& n : nodes)
            os << n.id << "," << n.role << "," << n.interests_in << "," << n.interests_out << ","
               << n.data_in << "," << n.data_out << "," << n.cs_hits << "," << n.pit_aggregated
               << "," << n.drops_unsigned << "," << n.drops_stale << "," << n.drops_wrong_node
               << "," << n.drops_bad_sig << "," << n.drops_malformed << "," << n.drops_unsolicited
               << "\n";
        return os.str();
    }
};

struct Interest {
    std::string name;
    uint64_t nonce = 0;
    Bytes signature;  // serialized InterestSignature; empty = unsigned
};

struct DataPacket {
    std::string name;
    std::shared_ptr<const Bytes> payload;
};

class Simulation {
public:
    Simulation(Topology topo, Scenario scn, uint64_t seed)
        : topo_(std::move(topo)), scn_(std::move(scn)), seed_(seed), tree_(scn_.year) {
        build();
    }

    Metrics run() {
        start_consumers();
        while (!queue_.empty()) {
            Event ev = std::move(const_cast<Event&>(queue_.top()));
            queue_.pop();
            now_ = ev.at;
            ev.fn();
        }
        return collect();
    }

    // fetched chunk payloads in segment order, excluding header/rev segments
    Bytes reassemble(int consumer) const {
        Bytes out;
        for (const auto& name : consumers_.at(consumer).plan) {
            if (name.find("/chunk_") == std::string::npos) continue;
            auto it = consumers_.at(consumer).received.find(name);
            if (it == consumers_.at(consumer).received.end())
                throw Unsatisfiable("consumer is missing segment " + name);
            out.insert(out.end(), it->second->begin(), it->second->end());
        }
        return out;
    }

    // segment names fetched by every consumer, in request order
    const std::vector<std::string>& plan() const { return consumers_.at(0).plan; }
    const Bytes& plaintext() const { return plaintext_; }
    const std::optional<Ciphertext>& ciphertext() const { return ct_; }
    const ConsumerKey& consumer_key(int i) const { return keys_.at(i); }
    const PublicParams& public_params() const { return crypto_->pp; }
    Bytes rekey() const { return rekey_bytes_; }

    // test hook: deliver a hand-built interest from a consumer node
    void inject_interest(int consumer, Interest interest, uint64_t at_us) {
        auto& cs = consumers_.at(consumer);
        schedule(at_us, [this, interest = std::move(interest), node = cs.node,
                         face = cs.access_face]() mutable {
            deliver_interest(peer_of(node, face), std::move(interest), reverse_face(node, face));
        });
    }

private:
    struct Event {
        uint64_t at;
        uint64_t seq;
        std::function<void()> fn;
        bool operator<(const Event& o) const {
            if (at != o.at) return at > o.at;
            return seq > o.seq;
        }
    };

    struct Face {
        int link;
        int peer;
    };

    struct PitEntry {
        std::vector<int> down_faces;
        uint64_t expiry = 0;
    };

    struct Lru {
        size_t capacity = 0;
        std::list<std::string> order;
        std::unordered_map<std::string,
                           std::pair<std::list<std::string>::iterator, std::shared_ptr<const Bytes>>>
            map;

        std::shared_ptr<const Bytes> get(const std::string& name) {
            auto it = map.find(name);
            if (it == map.end()) return nullptr;
            order.splice(order.begin(), order, it->second.first);
            return it->second.second;
        }
        void put(const std::string& name, std::shared_ptr<const Bytes> data) {
            if (capacity == 0) return;
            auto it = map.find(name);
            if (it != map.end()) {
                order.splice(order.begin(), order, it->second.first);
                it->second.second = std::move(data);
                return;
            }
            order.push_front(name);
            map[name] = {order.begin(), std::move(data)};
            if (map.size() > capacity) {
                map.erase(order.back());
                order.pop_back();
            }
        }
    };

    struct RouterState {
        std::unordered_map<std::string, PitEntry> pit;
        Lru cs;
        int upstream_face = -1;  // FIB next hop for the producer prefix
        uint64_t verify_busy_until = 0;
    };

    struct Outstanding {
        uint64_t nonce;
        int retries = 0;
    };

    struct ConsumerState {
        int node = -1;
        int access_face = -1;
        std::vector<std::string> plan;
        size_t next_plan = 0;
        std::unordered_map<std::string, Outstanding> outstanding;
        std::map<std::string, std::shared_ptr<const Bytes>> received;
        uint64_t send_busy_until = 0;
        uint64_t start_us = 0;
        uint64_t end_us = 0;
        uint64_t interests_sent = 0;
        uint64_t data_received = 0;
        bool started = false;
        bool done = false;
        Drbg rng{0};
    };

    struct CryptoState {
        PublicParams pp;
        MasterSecret ms;
        CryptoState(PublicParams p, MasterSecret m) : pp(std::move(p)), ms(std::move(m)) {}
    };

    // --- construction -------------------------------------------------------

    void build() {
        faces_.resize(topo_.nodes.size());
        for (size_t li = 0; li < topo_.links.size(); ++li) {
            const auto& l = topo_.links[li];
            faces_[l.a].push_back({static_cast<int>(li), l.b});
            faces_[l.b].push_back({static_cast<int>(li), l.a});
        }
        busy_.assign(topo_.links.size() * 2, 0);
        routers_.resize(topo_.nodes.size());
        metrics_.resize(topo_.nodes.size());
        for (size_t i = 0; i < topo_.nodes.size(); ++i) {
            metrics_[i].id = topo_.nodes[i].id;
            metrics_[i].role = role_name(topo_.nodes[i].role);
            routers_[i].cs.capacity = topo_.nodes[i].role == Role::edge ||
                                              topo_.nodes[i].role == Role::intermediate
                                          ? scn_.cs_capacity
                                          : 0;
        }

        producer_ = -1;
        for (size_t i = 0; i < topo_.nodes.size(); ++i) {
            if (topo_.nodes[i].role != Role::producer) continue;
            if (producer_ >= 0) throw Unsatisfiable("scenario needs exactly one producer");
            producer_ = static_cast<int>(i);
        }
        if (producer_ < 0) throw Unsatisfiable("scenario needs a producer node");

        auto next_hop = shortest_path_next_hop(topo_, producer_);
        for (size_t i = 0; i < topo_.nodes.size(); ++i) {
            if (static_cast<int>(i) == producer_) continue;
            for (size_t fi = 0; fi < faces_[i].size(); ++fi)
                if (faces_[i][fi].link == next_hop[i]) routers_[i].upstream_face = static_cast<int>(fi);
        }

        std::vector<int> consumer_nodes;
        for (size_t i = 0; i < topo_.nodes.size(); ++i)
            if (topo_.nodes[i].role == Role::consumer) consumer_nodes.push_back(static_cast<int>(i));
        std::sort(consumer_nodes.begin(), consumer_nodes.end(),
                  [&](int a, int b) { return topo_.nodes[a].id < topo_.nodes[b].id; });
        if (scn_.consumers > static_cast<int>(consumer_nodes.size()))
            throw Unsatisfiable("scenario wants " + std::to_string(scn_.consumers) +
                                " consumers, topology has " +
                                std::to_string(consumer_nodes.size()));

        Drbg master(seed_);
        engine_rng_ = std::make_unique<Drbg>(master.fork("engine"));
        publish_content(master);

        consumers_.resize(scn_.consumers);
        for (int ci = 0; ci < scn_.consumers; ++ci) {
            auto& cs = consumers_[ci];
            cs.node = consumer_nodes[ci];
            cs.access_face = 0;  // consumers have exactly one face
            cs.plan = plan_;
            cs.rng = master.fork("consumer/" + std::to_string(ci));
        }
    }

    // Publishes the scenario content at the producer. Baseline: plain
    // segments. With auth: one real publish; the DEM payload is segmented
    // and the ciphertext header rides as one extra segment. With
    // revocation: the rekey secret is mixed into the DEM key and the
    // broadcast header becomes a second extra segment.
    void publish_content(Drbg& master) {
        Drbg crng = master.fork("crypto");
        Drbg prng = master.fork("payload");
        NodeId leaf = date_to_leaf(scn_.pub_date, tree_);
        std::string base = scn_.prefix + "/" + leaf.label + "/" + scn_.file;

        size_t file_size = static_cast<size_t>(scn_.segments) * scn_.segment_size;
        if (scn_.auth) file_size -= aead::TAG_BYTES;  // DEM tag rides in the last segment
        plaintext_ = prng.bytes(file_size);

        auto add_segment = [&](const std::string& name, Bytes bytes) {
            auto ptr = std::make_shared<const Bytes>(std::move(bytes));
            store_[name] = ptr;
            plan_.push_back(name);
        };

        if (!scn_.auth) {
            for (int i = 0; i < scn_.segments; ++i) {
                size_t off = static_cast<size_t>(i) * scn_.segment_size;
                size_t len = std::min(scn_.segment_size, file_size - off);
                add_segment(base + "/chunk_" + std::to_string(i),
                            Bytes(plaintext_.begin() + off, plaintext_.begin() + off + len));
            }
            return;
        }

        auto st = producer_setup(scn_.year, scn_.delta_t, crng);
        crypto_ = std::make_unique<CryptoState>(st.pp, st.ms);
        tree_ = st.tree;

        if (scn_.revocation) {
            Drbg rrng = crng.fork("revocation");
            rev_setup_ = revocation::setup(8, 64, rrng);
            rekey_secret_ = revocation::random_rekey(rrng);
            rekey_bytes_ = revocation::rekey_bytes(rekey_secret_);
        }

        // month-long subscriptions covering the publication date
        Date start{scn_.year, scn_.pub_date.month, 1};
        Date end{scn_.year, scn_.pub_date.month, 28};
        for (int ci = 0; ci < scn_.consumers; ++ci) {
            std::string id = "consumer-" + std::to_string(ci);
            keys_.push_back(register_consumer(crypto_->ms, crypto_->pp, tree_, as_bytes(id), start,
                                              end, crng));
            if (scn_.revocation) {
                Drbg srng = crng.fork("share/" + std::to_string(ci));
                shares_.push_back(revocation::issue_share(*rev_setup_, id, srng));
            }
        }

        ct_ = publish(crypto_->ms, crypto_->pp, tree_, scn_.pub_date, base, plaintext_, crng,
                      rekey_bytes_);

        add_segment(base + "/header", ct_->header_bytes());
        if (scn_.revocation) {
            Drbg hrng = crng.fork("header");
            auto hdr = revocation::make_header(*rev_setup_, {}, rekey_secret_, hrng);
            ByteWriter w;
            revocation::serialize_header(hdr, rev_setup_->group, w);
            add_segment(scn_.prefix + "/" + leaf.label + "/revocation/seq=0", w.take());
        }
        for (int i = 0; i < scn_.segments; ++i) {
            size_t off = static_cast<size_t>(i) * scn_.segment_size;
            size_t len = std::min(scn_.segment_size, ct_->enc_payload.size() - off);
            add_segment(base + "/chunk_" + std::to_string(i),
                        Bytes(ct_->enc_payload.begin() + off, ct_->enc_payload.begin() + off + len));
        }
    }

    // --- engine -------------------------------------------------------------

    void schedule(uint64_t at, std::function<void()> fn) {
        queue_.push({at, seq_++, std::move(fn)});
    }

    int peer_of(int node, int face) const { return faces_[node][face].peer; }

    int reverse_face(int node, int face) const {
        int link = faces_[node][face].link;
        int peer = faces_[node][face].peer;
        for (size_t fi = 0; fi < faces_[peer].size(); ++fi)
            if (faces_[peer][fi].link == link) return static_cast<int>(fi);
        throw Unsatisfiable("face bookkeeping broken");
    }

    bool lost() {
        if (scn_.loss_rate <= 0) return false;
        return engine_rng_->next_u64() <
               static_cast<uint64_t>(scn_.loss_rate * 18446744073709551615.0);
    }

    // serialization + propagation delay; each link direction is a FIFO
    uint64_t transmit(int node, int face, size_t bytes) {
        const auto& f = faces_[node][face];
        const auto& link = topo_.links[f.link];
        int dir = link.a == node ? 0 : 1;
        uint64_t& busy = busy_[f.link * 2 + dir];
        uint64_t ser = bytes * 8'000'000ull / link.bw_bps;
        uint64_t start = std::max(now_, busy);
        busy = start + ser;
        return busy + link.lat_us;
    }

    static size_t interest_wire_size(const Interest& i) {
        return 32 + i.name.size() + i.signature.size();
    }
    static size_t data_wire_size(const DataPacket& d) {
        return 40 + d.name.size() + d.payload->size();
    }

    void send_interest(int node, int face, Interest interest) {
        metrics_[node].interests_out++;
        uint64_t at = transmit(node, face, interest_wire_size(interest));
        if (lost()) return;
        int peer = peer_of(node, face);
        int in_face = reverse_face(node, face);
        schedule(at, [this, peer, in_face, interest = std::move(interest)]() mutable {
            deliver_interest(peer, std::move(interest), in_face);
        });
    }

    void send_data(int node, int face, DataPacket data) {
        metrics_[node].data_out++;
        uint64_t at = transmit(node, face, data_wire_size(data));
        if (lost()) return;
        int peer = peer_of(node, face);
        int in_face = reverse_face(node, face);
        schedule(at, [this, peer, in_face, data = std::move(data)]() mutable {
            deliver_data(peer, std::move(data), in_face);
        });
    }

    // --- consumer side ------------------------------------------------------

    void start_consumers() {
        for (int ci = 0; ci < scn_.consumers; ++ci) {
            uint64_t at = scn_.stagger_us * static_cast<uint64_t>(ci);
            schedule(at, [this, ci] {
                consumers_[ci].started = true;
                consumers_[ci].start_us = now_;
                consumers_[ci].send_busy_until = now_;
                pump_consumer(ci);
            });
        }
    }

    void pump_consumer(int ci) {
        auto& cs = consumers_[ci];
        while (!cs.done && cs.outstanding.size() < static_cast<size_t>(scn_.window) &&
               cs.next_plan < cs.plan.size()) {
            issue_interest(ci, cs.plan[cs.next_plan++], 0);
        }
    }

    void issue_interest(int ci, const std::string& name, int retries) {
        auto& cs = consumers_[ci];
        uint64_t nonce = engine_rng_->next_u64();
        cs.outstanding[name] = {nonce, retries};

        uint64_t send_at = now_;
        Interest interest{name, nonce, {}};
        if (scn_.auth) {
            // signing is charged as serialized consumer-side service time
            send_at = std::max(now_, cs.send_busy_until) + scn_.sign_service_us;
            cs.send_busy_until = send_at;
            uint64_t ts = send_at / 1'000'000;
            auto sig = sign_interest(keys_[ci], crypto_->pp, name, ts,
                                     policy_path(scn_.pub_date, tree_), cs.rng);
            interest.signature = sig.to_bytes();
        }
        cs.interests_sent++;
        schedule(send_at, [this, ci, interest = std::move(interest)]() mutable {
            auto& c = consumers_[ci];
            send_interest(c.node, c.access_face, std::move(interest));
        });
        schedule(send_at + scn_.retransmit_us,
                 [this, ci, name, nonce] { on_timeout(ci, name, nonce); });
    }

    void on_timeout(int ci, const std::string& name, uint64_t nonce) {
        auto& cs = consumers_[ci];
        auto it = cs.outstanding.find(name);
        if (it == cs.outstanding.end() || it->second.nonce != nonce) return;
        int retries = it->second.retries + 1;
        if (retries > 32) throw Unsatisfiable("segment " + name + " unreachable");
        issue_interest(ci, name, retries);
    }

    void consumer_receive(int ci, const DataPacket& data) {
        auto& cs = consumers_[ci];
        if (!cs.outstanding.erase(data.name)) return;  // duplicate or late
        if (cs.received.emplace(data.name, data.payload).second) cs.data_received++;
        if (cs.received.size() == cs.plan.size() && !cs.done) {
            cs.done = true;
            cs.end_us = now_;
            return;
        }
        pump_consumer(ci);
    }

    // --- forwarding plane ----------------------------------------------------

    void deliver_interest(int node, Interest interest, int in_face) {
        metrics_[node].interests_in++;
        Role role = topo_.nodes[node].role;
        if (role == Role::consumer) return;  // interests never target consumers
        if (role == Role::producer) {
            producer_serve(node, interest, in_face);
            return;
        }
        bool from_consumer =
            topo_.nodes[peer_of(node, in_face)].role == Role::consumer;
        if (role == Role::edge && scn_.auth && from_consumer) {
            edge_ingress(node, std::move(interest), in_face);
            return;
        }
        forward_interest(node, std::move(interest), in_face);
    }

    // signature gate: drops never enter the PIT
    void edge_ingress(int node, Interest interest, int in_face) {
        auto& rs = routers_[node];
        if (interest.signature.empty()) {
            metrics_[node].drops_unsigned++;
            return;
        }
        uint64_t done = std::max(now_, rs.verify_busy_until) + scn_.verify_service_us;
        rs.verify_busy_until = done;
        schedule(done, [this, node, interest = std::move(interest), in_face]() mutable {
            VerifyStatus status;
            try {
                ByteReader r(ByteView{interest.signature});
                InterestSignature sig = InterestSignature::parse(r, interest.name);
                r.expect_done();
                NodeId leaf = tree_.parse_label(parse_content_name(interest.name).leaf_label);
                status = verify_interest(crypto_->pp, sig, now_ / 1'000'000,
                                         path_from_leaf(leaf, tree_))
                             .status;
            } catch (const Error&) {
                metrics_[node].drops_malformed++;
                return;
            }
            switch (status) {
                case VerifyStatus::accept: break;
                case VerifyStatus::stale: metrics_[node].drops_stale++; return;
                case VerifyStatus::wrong_node: metrics_[node].drops_wrong_node++; return;
                default: metrics_[node].drops_bad_sig++; return;
            }
            forward_interest(node, std::move(interest), in_face);
        });
    }

    void forward_interest(int node, Interest interest, int in_face) {
        auto& rs = routers_[node];
        if (auto cached = rs.cs.get(interest.name)) {
            metrics_[node].cs_hits++;
            send_data(node, in_face, {interest.name, cached});
            return;
        }
        auto it = rs.pit.find(interest.name);
        if (it != rs.pit.end() && it->second.expiry > now_) {
            auto& faces = it->second.down_faces;
            if (std::find(faces.begin(), faces.end(), in_face) == faces.end()) {
                faces.push_back(in_face);
                metrics_[node].pit_aggregated++;
                return;  // aggregated; nothing goes upstream
            }
            // same face again: a consumer retransmission after loss;
            // refresh the entry and forward upstream once more
            it->second.expiry = now_ + scn_.pit_lifetime_us;
            if (rs.upstream_face >= 0) send_interest(node, rs.upstream_face, std::move(interest));
            return;
        }
        rs.pit[interest.name] = {{in_face}, now_ + scn_.pit_lifetime_us};
        metrics_[node].pit_inserts++;
        if (rs.upstream_face < 0) {
            metrics_[node].drops_malformed++;
            return;
        }
        send_interest(node, rs.upstream_face, std::move(interest));
    }

    void producer_serve(int node, const Interest& interest, int in_face) {
        auto it = store_.find(interest.name);
        if (it == store_.end()) {
            metrics_[node].drops_malformed++;
            return;
        }
        send_data(node, in_face, {interest.name, it->second});
    }

    void deliver_data(int node, DataPacket data, int /*in_face*/) {
        metrics_[node].data_in++;
        Role role = topo_.nodes[node].role;
        if (role == Role::consumer) {
            for (int ci = 0; ci < scn_.consumers; ++ci)
                if (consumers_[ci].node == node) consumer_receive(ci, data);
            return;
        }
        forward_data(node, std::move(data));
    }

    void forward_data(int node, DataPacket data) {
        auto& rs = routers_[node];
        auto it = rs.pit.find(data.name);
        if (it == rs.pit.end() || it->second.expiry <= now_) {
            if (it != rs.pit.end()) rs.pit.erase(it);
            metrics_[node].drops_unsolicited++;
            return;
        }
        rs.cs.put(data.name, data.payload);
        std::vector<int> faces = std::move(it->second.down_faces);
        rs.pit.erase(it);
        for (int f : faces) send_data(node, f, data);
    }

    // --- results -------------------------------------------------------------

    Metrics collect() {
        Metrics m;
        m.total_segments = plan_.size();
        double tt_sum = 0, gp_sum = 0;
        for (int ci = 0; ci < scn_.consumers; ++ci) {
            const auto& cs = consumers_[ci];
            if (!cs.done)
                throw Unsatisfiable("consumer " + topo_.nodes[cs.node].id +
                                    " did not finish its fetch");
            ConsumerMetrics cm;
            cm.id = topo_.nodes[cs.node].id;
            cm.transfer_time_s = static_cast<double>(cs.end_us - cs.start_us) / 1e6;
            uint64_t bytes = 0;
            for (const auto& [name, payload] : cs.received) bytes += payload->size();
            cm.goodput_bps = cm.transfer_time_s > 0 ? bytes * 8.0 / cm.transfer_time_s : 0;
            cm.interests_sent = cs.interests_sent;
            cm.data_received = cs.data_received;
            tt_sum += cm.transfer_time_s;
            gp_sum += cm.goodput_bps;
            m.consumers.push_back(std::move(cm));
        }
        m.nodes = metrics_;
        m.producer_data_out = metrics_[producer_].data_out;
        m.mean_transfer_time_s = tt_sum / std::max<size_t>(1, m.consumers.size());
        m.mean_goodput_bps = gp_sum / std::max<size_t>(1, m.consumers.size());
        return m;
    }

    Topology topo_;
    Scenario scn_;
    uint64_t seed_;
    PolicyTree tree_;

    std::vector<std::vector<Face>> faces_;
    std::vector<uint64_t> busy_;
    std::vector<RouterState> routers_;
    std::vector<NodeMetrics> metrics_;
    std::vector<ConsumerState> consumers_;
    int producer_ = -1;

    std::unordered_map<std::string, std::shared_ptr<const Bytes>> store_;
    std::vector<std::string> plan_;
    Bytes plaintext_;
    std::optional<Ciphertext> ct_;
    std::unique_ptr<CryptoState> crypto_;
    std::vector<ConsumerKey> keys_;
    std::optional<revocation::Setup> rev_setup_;
    std::vector<revocation::Share> shares_;
    mpz_class rekey_secret_;
    Bytes rekey_bytes_;

    std::priority_queue<Event> queue_;
    uint64_t now_ = 0;
    uint64_t seq_ = 0;
    std::unique_ptr<Drbg> engine_rng_;
};

inline Metrics run_fetch(const Topology& topo, const Scenario& scn, uint64_t seed) {
    Simulation sim(topo, scn, seed);
    return sim.run();
}

}  // namespace tsub::ndnsim
