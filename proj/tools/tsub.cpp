// Command-line harness for the time-based subscription access-control
// scheme: key ceremonies, publish/sign/verify/decrypt workflows, immediate
// revocation, micro-benchmarks and the NDN forwarding-plane simulator.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>

#include "tsub/config.hpp"
#include "tsub/ndnsim.hpp"
#include "tsub/revocation.hpp"
#include "tsub/scheme.hpp"

namespace fs = std::filesystem;
using namespace tsub;

namespace {

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, ByteView data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("short write to " + path);
}

void write_file(const std::string& path, const std::string& text) {
    write_file(path, as_bytes(text));
}

std::string artifact_path(const std::string& path) {
    const char* dir = env_artifact_dir_override();
    if (dir == nullptr || path.find('/') != std::string::npos) return path;
    return std::string(dir) + "/" + path;
}

// --- artifact file envelopes -------------------------------------------------

struct PpFile {
    PublicParams pp;
    int year;
};

void save_pp(const std::string& path, const PublicParams& pp, int year) {
    ByteWriter w;
    w.raw(as_bytes("TSP1"));
    w.u32(static_cast<uint32_t>(year));
    pp.serialize(w);
    write_file(path, ByteView{w.data()});
}

PpFile load_pp(const std::string& path) {
    Bytes data = read_file(path);
    ByteReader r{ByteView{data}};
    auto magic = r.raw(4);
    if (!std::equal(magic.begin(), magic.end(), "TSP1"))
        throw Malformed(path + " is not a public-parameters file");
    int year = static_cast<int>(r.u32());
    PublicParams pp = PublicParams::parse(r);
    r.expect_done();
    return {std::move(pp), year};
}

void save_ms(const std::string& path, const MasterSecret& ms) {
    ByteWriter w;
    ms.serialize(w);
    write_file(path, ByteView{w.data()});
}

MasterSecret load_ms(const std::string& path) {
    Bytes data = read_file(path);
    ByteReader r{ByteView{data}};
    MasterSecret ms = MasterSecret::parse(r);
    r.expect_done();
    return ms;
}

struct KeyFile {
    ConsumerKey key;
    int year;
};

void save_key(const std::string& path, const ConsumerKey& key, int year) {
    ByteWriter w;
    w.raw(as_bytes("TSK1"));
    w.u32(static_cast<uint32_t>(year));
    w.var_bytes(ByteView{key.consumer_id});
    key.serialize(w);
    write_file(path, ByteView{w.data()});
}

KeyFile load_key(const std::string& path) {
    Bytes data = read_file(path);
    ByteReader r{ByteView{data}};
    auto magic = r.raw(4);
    if (!std::equal(magic.begin(), magic.end(), "TSK1"))
        throw Malformed(path + " is not a consumer-key file");
    int year = static_cast<int>(r.u32());
    Bytes id = r.var_bytes();
    PolicyTree tree(year);
    ConsumerKey key = ConsumerKey::parse(r, std::move(id), tree);
    r.expect_done();
    return {std::move(key), year};
}

void save_rekey(const std::string& path, const mpz_class& rekey) {
    ByteWriter w;
    w.raw(as_bytes("TSRK"));
    w.u8(1);
    w.var_bytes(ByteView{revocation::rekey_bytes(rekey)});
    write_file(path, ByteView{w.data()});
}

Bytes load_rekey(const std::string& path) {
    Bytes data = read_file(path);
    ByteReader r{ByteView{data}};
    auto magic = r.raw(4);
    if (!std::equal(magic.begin(), magic.end(), "TSRK"))
        throw Malformed(path + " is not a rekey file");
    if (r.u8() != 1) throw Malformed("unsupported rekey file version");
    Bytes k = r.var_bytes();
    r.expect_done();
    return k;
}

uint64_t now_seconds() {
    return static_cast<uint64_t>(
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
}

double mean_ms(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

template <typename Fn>
double time_ms(Fn&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

// --- subcommands --------------------------------------------------------------

int cmd_setup(int year, uint64_t delta_t, uint64_t seed, const std::string& out_pp,
              const std::string& out_ms, unsigned rev_degree, unsigned rev_capacity,
              const std::string& out_rev) {
    Drbg rng(seed);
    auto st = producer_setup(year, delta_t, rng);
    save_pp(artifact_path(out_pp), st.pp, year);
    save_ms(artifact_path(out_ms), st.ms);
    std::cout << "wrote " << out_pp << " and " << out_ms << " (year " << year << ", delta_t "
              << delta_t << "s)\n";
    if (!out_rev.empty()) {
        Drbg rrng = rng.fork("revocation");
        auto rst = revocation::setup(rev_degree, rev_capacity, rrng);
        ByteWriter w;
        revocation::serialize_setup(rst, w);
        write_file(artifact_path(out_rev), ByteView{w.data()});
        std::cout << "wrote " << out_rev << " (degree " << rev_degree << ", capacity "
                  << rev_capacity << ")\n";
    }
    return 0;
}

int cmd_register(const std::string& pp_path, const std::string& ms_path, const std::string& id,
                 const std::string& start, const std::string& end, uint64_t seed,
                 const std::string& out_key, const std::string& rev_state,
                 const std::string& out_share) {
    auto ppf = load_pp(pp_path);
    auto ms = load_ms(ms_path);
    PolicyTree tree(ppf.year);
    Drbg rng(seed);
    ConsumerKey key = register_consumer(ms, ppf.pp, tree, as_bytes(id), parse_date(start),
                                        parse_date(end), rng);
    save_key(artifact_path(out_key), key, ppf.year);
    std::cout << "wrote " << out_key << " covering " << key.tokens.size() << " node(s):";
    for (const auto& t : key.tokens) std::cout << " " << t.node.label;
    std::cout << "\n";

    if (!rev_state.empty()) {
        Bytes data = read_file(rev_state);
        ByteReader r{ByteView{data}};
        auto rst = revocation::parse_setup(r);
        Drbg srng = rng.fork("share");
        auto share = revocation::issue_share(rst, id, srng);
        ByteWriter sw;
        revocation::serialize_share(share, rst.group, sw);
        write_file(artifact_path(out_share.empty() ? id + ".share" : out_share),
                   ByteView{sw.data()});
        ByteWriter tw;
        revocation::serialize_setup(rst, tw);
        write_file(rev_state, ByteView{tw.data()});
        std::cout << "issued revocation share\n";
    }
    return 0;
}

int cmd_publish(const std::string& pp_path, const std::string& ms_path, const std::string& date_s,
                const std::string& prefix, const std::string& file, const std::string& segment,
                const std::string& in_path, const std::string& out_path, uint64_t seed,
                const std::string& rekey_path) {
    auto ppf = load_pp(pp_path);
    auto ms = load_ms(ms_path);
    PolicyTree tree(ppf.year);
    Date date = parse_date(date_s);
    std::string name = make_content_name({prefix, date_to_leaf(date, tree).label, file, segment});
    Bytes plaintext = read_file(in_path);
    Bytes rekey;
    if (!rekey_path.empty()) rekey = load_rekey(rekey_path);
    Drbg rng(seed);
    Ciphertext ct = publish(ms, ppf.pp, tree, date, name, plaintext, rng, rekey);
    ByteWriter w;
    ct.serialize(w);
    write_file(artifact_path(out_path), ByteView{w.data()});
    std::cout << name << "\n";
    std::cerr << "wrote " << out_path << " (core " << ct.core_size() << " B, payload "
              << ct.enc_payload.size() << " B)\n";
    return 0;
}

int cmd_sign(const std::string& pp_path, const std::string& key_path, const std::string& name,
             uint64_t ts, bool ts_set, uint64_t seed, const std::string& out_path) {
    auto ppf = load_pp(pp_path);
    auto kf = load_key(key_path);
    PolicyTree tree(kf.year);
    NodeId leaf = tree.parse_label(parse_content_name(name).leaf_label);
    if (!ts_set) ts = now_seconds();
    Drbg rng(seed);
    InterestSignature sig =
        sign_interest(kf.key, ppf.pp, name, ts, path_from_leaf(leaf, tree), rng);
    write_file(artifact_path(out_path), ByteView{sig.to_bytes()});
    std::cout << "signed " << name << " at ts=" << ts << " with node " << sig.node_label << "\n";
    return 0;
}

int cmd_verify(const std::string& pp_path, const std::string& sig_path, const std::string& name,
               uint64_t now, bool now_set) {
    auto ppf = load_pp(pp_path);
    PolicyTree tree(ppf.year);
    Bytes data = read_file(sig_path);
    VerifyResult res;
    try {
        ByteReader r{ByteView{data}};
        InterestSignature sig = InterestSignature::parse(r, name);
        r.expect_done();
        NodeId leaf = tree.parse_label(parse_content_name(name).leaf_label);
        if (!now_set) now = now_seconds();
        res = verify_interest(ppf.pp, sig, now, path_from_leaf(leaf, tree));
    } catch (const Error& e) {
        std::cout << "reject(malformed)\n";
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(Errc::malformed);
    }
    if (res.accepted()) {
        std::cout << "accept\n";
        return 0;
    }
    std::cout << "reject(" << res.reason() << ")\n";
    switch (res.status) {
        case VerifyStatus::stale: return static_cast<int>(Errc::stale);
        case VerifyStatus::wrong_node: return static_cast<int>(Errc::wrong_node);
        default: return static_cast<int>(Errc::bad_signature);
    }
}

int cmd_decrypt(const std::string& pp_path, const std::string& key_path, const std::string& ct_path,
                const std::string& out_path, const std::string& hdr_path,
                const std::string& share_path) {
    auto ppf = load_pp(pp_path);
    auto kf = load_key(key_path);
    Bytes data = read_file(ct_path);
    ByteReader r{ByteView{data}};
    Ciphertext ct = Ciphertext::parse(r);
    r.expect_done();

    Bytes rekey;
    if (!hdr_path.empty()) {
        Bytes hd = read_file(hdr_path);
        ByteReader hr{ByteView{hd}};
        auto hdr = revocation::parse_header(hr);
        Bytes sd = read_file(share_path);
        ByteReader sr{ByteView{sd}};
        auto share = revocation::parse_share(sr);
        try {
            rekey = revocation::rekey_bytes(revocation::recover_key(hdr, share));
        } catch (const DegenerateShare&) {
            // a burned share cannot recover the rekey secret; the decryption
            // attempt proceeds without it and fails authentication
            std::cerr << "warning: share is burned into the revocation header\n";
        }
    }
    Bytes plain = decrypt(kf.key, ppf.pp, ct, rekey);
    write_file(artifact_path(out_path), ByteView{plain});
    std::cout << "wrote " << out_path << " (" << plain.size() << " B)\n";
    return 0;
}

int cmd_revoke(const std::string& rev_state, const std::vector<std::string>& revoked,
               uint64_t seed, const std::string& out_header, const std::string& out_rekey) {
    Bytes data = read_file(rev_state);
    ByteReader r{ByteView{data}};
    auto rst = revocation::parse_setup(r);
    Drbg rng(seed);
    mpz_class rekey = revocation::random_rekey(rng);
    auto hdr = revocation::make_header(rst, revoked, rekey, rng);
    ByteWriter hw;
    revocation::serialize_header(hdr, rst.group, hw);
    write_file(artifact_path(out_header), ByteView{hw.data()});
    save_rekey(artifact_path(out_rekey), rekey);
    std::cout << "wrote " << out_header << " burning " << revoked.size()
              << " share(s); rekey secret in " << out_rekey << "\n";
    return 0;
}

// --- bench suites ---------------------------------------------------------------

int cmd_bench(const std::string& suite, int trials, uint64_t seed, const std::string& out_csv) {
    if (trials < 1) throw InvalidRange("bench needs at least one trial");
    Drbg rng(seed);
    std::ostringstream csv;
    std::ostringstream human;

    if (suite == "sizes") {
        auto st = producer_setup(2023, 10, rng);
        // subscription 2023-01-07..2023-01-28 covers exactly 4 nodes
        auto key = register_consumer(st.ms, st.pp, st.tree, as_bytes("alice"), Date{2023, 1, 7},
                                     Date{2023, 1, 28}, rng);
        std::string name = "/com/test/m1w1d7/abc.mp4/chunk_1";
        auto ct = publish(st.ms, st.pp, st.tree, Date{2023, 1, 7}, name, as_bytes("demo"), rng);
        auto sig = sign_interest(key, st.pp, name, 1000, Date{2023, 1, 7}, st.tree, rng);
        csv << "artifact,parameter,measured_bytes,expected_bytes\n";
        csv << "ciphertext_core,|tau|=4," << ct.core_size() << ",484\n";
        csv << "consumer_key_core,|CS|=" << key.tokens.size() << "," << key.core_size()
            << ",532\n";
        csv << "signature_core,," << sig.core_size() << ",340\n";
        csv << "element,scalar," << SCALAR_BYTES << ",20\n";
        csv << "element,g1," << G1_BYTES << ",64\n";
        csv << "element,gt," << GT_BYTES << ",128\n";
        human << "ciphertext core (|tau|=4):  " << ct.core_size() << " B (expected 484)\n"
              << "consumer key core (|CS|=4): " << key.core_size() << " B (expected 532)\n"
              << "signature core:             " << sig.core_size() << " B (expected 340)\n";
    } else if (suite == "publish-height") {
        auto st = producer_setup(2023, 10, rng);
        csv << "height,publish_ms,decrypt_ms\n";
        for (int h : {3, 5, 7, 9}) {
            MasterSecret ms = st.ms;
            std::vector<NodeId> path;
            for (int i = 0; i < h; ++i) {
                NodeId n{"lvl" + std::to_string(i), NodeLevel::day, 0, 0, 0};
                ms.node_secrets.emplace_back(n.label, Scalar::random(rng));
                path.push_back(n);
            }
            ConsumerKey key;
            key.consumer_id = to_bytes("bench");
            key.uk = Scalar::random(rng);
            key.tokens.push_back(make_node_token(ms, st.pp, ByteView{key.consumer_id}, key.uk,
                                                 path.front()));
            Bytes payload = rng.bytes(1024);
            (void)publish_on_path(ms, st.pp, path, "/bench/warmup", payload, rng);
            std::vector<double> pub_ms, dec_ms;
            for (int t = 0; t < trials; ++t) {
                Ciphertext ct;
                pub_ms.push_back(time_ms([&] {
                    ct = publish_on_path(ms, st.pp, path, "/bench/h" + std::to_string(h), payload,
                                         rng);
                }));
                Bytes plain;
                dec_ms.push_back(time_ms([&] { plain = decrypt(key, st.pp, ct); }));
                if (plain != payload) throw Unsatisfiable("bench roundtrip failed");
            }
            csv << h << "," << mean_ms(pub_ms) << "," << mean_ms(dec_ms) << "\n";
            human << "height " << h << ": publish " << std::fixed << std::setprecision(3)
                  << mean_ms(pub_ms) << " ms, decrypt " << mean_ms(dec_ms) << " ms\n";
        }
    } else if (suite == "keyupdate-revoked") {
        csv << "revoked,keyupdate_ms\n";
        for (unsigned n : {1u, 4u, 7u, 11u}) {
            std::vector<double> ms_list;
            for (int t = -1; t < trials; ++t) {  // first pass warms caches, untimed
                auto rst = revocation::setup(n, 2 * n + 4, rng);
                std::vector<std::string> ids;
                std::vector<revocation::Share> shares;
                for (unsigned i = 0; i < n + 1; ++i) {
                    ids.push_back("c" + std::to_string(i));
                    shares.push_back(revocation::issue_share(rst, ids.back(), rng));
                }
                std::vector<std::string> revoked(ids.begin(), ids.begin() + n);
                mpz_class k = revocation::random_rekey(rng);
                double ms = time_ms([&] {
                    auto hdr = revocation::make_header(rst, revoked, k, rng);
                    if (revocation::recover_key(hdr, shares.back()) != k)
                        throw Unsatisfiable("bench recovery failed");
                });
                if (t >= 0) ms_list.push_back(ms);
            }
            csv << n << "," << mean_ms(ms_list) << "\n";
            human << n << " revoked: " << std::fixed << std::setprecision(3) << mean_ms(ms_list)
                  << " ms\n";
        }
    } else if (suite == "crypto-ops") {
        auto st = producer_setup(2023, 10, rng);
        auto key = register_consumer(st.ms, st.pp, st.tree, as_bytes("alice"), Date{2023, 1, 1},
                                     Date{2023, 1, 28}, rng);
        std::string name = "/com/test/m1w1d7/abc.mp4/chunk_1";
        Bytes payload = rng.bytes(4096);
        Scalar a = Scalar::random(rng);
        std::vector<double> t_pair, t_g1, t_gt, t_sign, t_verify, t_pub, t_dec;
        for (int t = 0; t < trials; ++t) {
            t_pair.push_back(time_ms([&] { (void)pair(st.pp.g, st.pp.g); }));
            t_g1.push_back(time_ms([&] { (void)st.pp.g.pow(a); }));
            t_gt.push_back(time_ms([&] { (void)st.pp.e_gg.pow(a); }));
            Ciphertext ct;
            t_pub.push_back(time_ms(
                [&] { ct = publish(st.ms, st.pp, st.tree, Date{2023, 1, 7}, name, payload, rng); }));
            InterestSignature sig;
            t_sign.push_back(time_ms(
                [&] { sig = sign_interest(key, st.pp, name, 1000, Date{2023, 1, 7}, st.tree, rng); }));
            t_verify.push_back(time_ms([&] {
                if (!verify_interest(st.pp, sig, 1000, Date{2023, 1, 7}, st.tree).accepted())
                    throw Unsatisfiable("bench verification failed");
            }));
            t_dec.push_back(time_ms([&] { (void)decrypt(key, st.pp, ct); }));
        }
        csv << "op,mean_ms\n";
        csv << "pairing," << mean_ms(t_pair) << "\n";
        csv << "g1_exp," << mean_ms(t_g1) << "\n";
        csv << "gt_exp," << mean_ms(t_gt) << "\n";
        csv << "publish_h4," << mean_ms(t_pub) << "\n";
        csv << "sign," << mean_ms(t_sign) << "\n";
        csv << "verify," << mean_ms(t_verify) << "\n";
        csv << "decrypt," << mean_ms(t_dec) << "\n";
        human << std::fixed << std::setprecision(3) << "pairing " << mean_ms(t_pair)
              << " ms | g1 exp " << mean_ms(t_g1) << " ms | gt exp " << mean_ms(t_gt)
              << " ms\npublish(h=4) " << mean_ms(t_pub) << " ms | sign " << mean_ms(t_sign)
              << " ms | verify " << mean_ms(t_verify) << " ms | decrypt " << mean_ms(t_dec)
              << " ms\n";
    } else {
        throw ParseError("unknown bench suite: " + suite);
    }

    if (out_csv.empty()) {
        std::cout << csv.str();
    } else {
        write_file(artifact_path(out_csv), csv.str());
        std::cout << human.str() << "csv written to " << out_csv << "\n";
    }
    return 0;
}

int cmd_sim(const std::string& topo_path, ndnsim::Scenario scn, uint64_t seed,
            const std::string& out_dir) {
    auto topo = ndnsim::load_topology(topo_path);
    ndnsim::Simulation sim(topo, scn, seed);
    auto metrics = sim.run();

    fs::create_directories(out_dir);
    write_file(out_dir + "/consumers.csv", metrics.consumers_csv());
    write_file(out_dir + "/nodes.csv", metrics.nodes_csv());

    uint64_t drops = 0;
    for (const auto& n : metrics.nodes)
        drops += n.drops_unsigned + n.drops_stale + n.drops_wrong_node + n.drops_bad_sig +
                 n.drops_malformed + n.drops_unsolicited;
    std::cout << "segments per consumer:   " << metrics.total_segments << "\n";
    std::cout << "mean transfer time:      " << std::fixed << std::setprecision(6)
              << metrics.mean_transfer_time_s << " s\n";
    std::cout << "mean goodput:            " << std::setprecision(0) << metrics.mean_goodput_bps
              << " bps\n";
    std::cout << "producer data egress:    " << metrics.producer_data_out << "\n";
    std::cout << "dropped packets:         " << drops << "\n";
    std::cout << "metrics: " << out_dir << "/consumers.csv, " << out_dir << "/nodes.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-based subscription access control for NDN"};
    app.require_subcommand(1);

    // setup
    auto* setup = app.add_subcommand("setup", "producer setup: generate PP/MS (and optionally a revocation state)");
    int year = 2023;
    uint64_t delta_t = 10, seed = 1;
    std::string out_pp = "pp.bin", out_ms = "ms.bin", out_rev;
    unsigned rev_degree = 16, rev_capacity = 128;
    setup->add_option("--year", year);
    setup->add_option("--delta-t", delta_t, "freshness window, seconds");
    setup->add_option("--seed", seed);
    setup->add_option("--out-pp", out_pp);
    setup->add_option("--out-ms", out_ms);
    setup->add_option("--out-rev", out_rev, "also create a revocation state file");
    setup->add_option("--rev-degree", rev_degree);
    setup->add_option("--rev-capacity", rev_capacity);

    // register
    auto* reg = app.add_subcommand("register", "issue a consumer key for a subscription period");
    std::string pp_path = "pp.bin", ms_path = "ms.bin", id, start, end, out_key = "key.bin";
    std::string rev_state, out_share;
    uint64_t reg_seed = 2;
    reg->add_option("--pp", pp_path);
    reg->add_option("--ms", ms_path);
    reg->add_option("--id", id)->required();
    reg->add_option("--start", start, "YYYY-MM-DD")->required();
    reg->add_option("--end", end, "YYYY-MM-DD")->required();
    reg->add_option("--seed", reg_seed);
    reg->add_option("--out", out_key);
    reg->add_option("--rev-state", rev_state, "also issue a revocation share");
    reg->add_option("--out-share", out_share);

    // publish
    auto* pub = app.add_subcommand("publish", "encrypt content under the current date's policy path");
    std::string pub_pp = "pp.bin", pub_ms = "ms.bin", pub_date, prefix = "/com/test",
                file = "abc.mp4", segment = "chunk_1", in_path, out_ct = "ct.bin", rekey_path;
    uint64_t pub_seed = 3;
    pub->add_option("--pp", pub_pp);
    pub->add_option("--ms", pub_ms);
    pub->add_option("--date", pub_date, "YYYY-MM-DD")->required();
    pub->add_option("--prefix", prefix);
    pub->add_option("--file", file);
    pub->add_option("--segment", segment);
    pub->add_option("--in", in_path)->required();
    pub->add_option("--out", out_ct);
    pub->add_option("--seed", pub_seed);
    pub->add_option("--rekey", rekey_path, "mix a revocation rekey secret into the DEM key");

    // sign
    auto* sgn = app.add_subcommand("sign", "sign an interest for a content name");
    std::string sgn_pp = "pp.bin", sgn_key = "key.bin", sgn_name, out_sig = "sig.bin";
    uint64_t sgn_ts = 0, sgn_seed = 4;
    sgn->add_option("--pp", sgn_pp);
    sgn->add_option("--key", sgn_key);
    sgn->add_option("--name", sgn_name)->required();
    auto* ts_opt = sgn->add_option("--ts", sgn_ts, "signature timestamp, seconds (default: now)");
    sgn->add_option("--seed", sgn_seed);
    sgn->add_option("--out", out_sig);

    // verify
    auto* ver = app.add_subcommand("verify", "edge-router verification of an interest signature");
    std::string ver_pp = "pp.bin", ver_sig = "sig.bin", ver_name;
    uint64_t ver_now = 0;
    ver->add_option("--pp", ver_pp);
    ver->add_option("--sig", ver_sig);
    ver->add_option("--name", ver_name)->required();
    auto* now_opt = ver->add_option("--now", ver_now, "verification time, seconds (default: now)");

    // decrypt
    auto* dec = app.add_subcommand("decrypt", "decrypt a ciphertext with a consumer key");
    std::string dec_pp = "pp.bin", dec_key = "key.bin", dec_ct = "ct.bin", dec_out = "plain.bin";
    std::string dec_hdr, dec_share;
    dec->add_option("--pp", dec_pp);
    dec->add_option("--key", dec_key);
    dec->add_option("--ct", dec_ct);
    dec->add_option("--out", dec_out);
    dec->add_option("--rev-header", dec_hdr, "recover the rekey secret from this header");
    dec->add_option("--rev-share", dec_share);

    // revoke
    auto* rev = app.add_subcommand("revoke", "broadcast an immediate-revocation header");
    std::string rev_path = "rev.bin", out_header = "hdr.bin", out_rekey = "rekey.bin";
    std::vector<std::string> revoked;
    uint64_t rev_seed = 5;
    rev->add_option("--rev-state", rev_path);
    rev->add_option("--revoke", revoked, "consumer id to revoke (repeatable)");
    rev->add_option("--seed", rev_seed);
    rev->add_option("--out-header", out_header);
    rev->add_option("--out-rekey", out_rekey);

    // bench
    auto* bench = app.add_subcommand("bench", "micro-benchmarks and size measurements");
    std::string suite = "crypto-ops", bench_out;
    int trials = 20;
    uint64_t bench_seed = 6;
    bench->add_option("--suite", suite, "sizes | publish-height | keyupdate-revoked | crypto-ops");
    bench->add_option("--trials", trials);
    bench->add_option("--seed", bench_seed);
    bench->add_option("--out", bench_out, "write CSV here instead of stdout");

    // sim
    auto* sim = app.add_subcommand("sim", "run a forwarding-plane scenario");
    std::string topo_path = "data/ndn-testbed.txt", scenario = "i", out_dir = "sim-out",
                config_path;
    ndnsim::Scenario scn;
    uint64_t sim_seed = 1;
    sim->add_option("--topology", topo_path);
    sim->add_option("--scenario", scenario,
                    "i (baseline) | ii (+auth) | iii (+auth+revocation) | custom (config flags)");
    auto* opt_consumers = sim->add_option("--consumers", scn.consumers);
    auto* opt_segments = sim->add_option("--segments", scn.segments);
    auto* opt_segsize = sim->add_option("--segment-size", scn.segment_size);
    auto* opt_stagger = sim->add_option("--stagger-us", scn.stagger_us);
    auto* opt_window = sim->add_option("--window", scn.window);
    auto* opt_loss = sim->add_option("--loss-rate", scn.loss_rate);
    auto* opt_cs = sim->add_option("--cs-capacity", scn.cs_capacity);
    auto* opt_seed = sim->add_option("--seed", sim_seed);
    sim->add_option("--out-dir", out_dir);
    sim->add_option("--config", config_path, "sectioned key=value config; flags override");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*setup)
            return cmd_setup(year, delta_t, seed, out_pp, out_ms, rev_degree, rev_capacity,
                             out_rev);
        if (*reg)
            return cmd_register(pp_path, ms_path, id, start, end, reg_seed, out_key, rev_state,
                                out_share);
        if (*pub)
            return cmd_publish(pub_pp, pub_ms, pub_date, prefix, file, segment, in_path, out_ct,
                               pub_seed, rekey_path);
        if (*sgn)
            return cmd_sign(sgn_pp, sgn_key, sgn_name, sgn_ts, ts_opt->count() > 0, sgn_seed,
                            out_sig);
        if (*ver) return cmd_verify(ver_pp, ver_sig, ver_name, ver_now, now_opt->count() > 0);
        if (*dec) return cmd_decrypt(dec_pp, dec_key, dec_ct, dec_out, dec_hdr, dec_share);
        if (*rev) return cmd_revoke(rev_path, revoked, rev_seed, out_header, out_rekey);
        if (*bench) return cmd_bench(suite, trials, bench_seed, bench_out);
        if (*sim) {
            if (!config_path.empty()) {
                RunConfig cfg = RunConfig::load(config_path);
                topo_path = cfg.get("sim", "topology", topo_path);
                scenario = cfg.get("sim", "scenario", scenario);
                out_dir = cfg.get("sim", "out_dir", out_dir);
                if (opt_consumers->count() == 0)
                    scn.consumers = static_cast<int>(cfg.get_int("sim", "consumers", scn.consumers));
                if (opt_segments->count() == 0)
                    scn.segments = static_cast<int>(cfg.get_int("sim", "segments", scn.segments));
                if (opt_segsize->count() == 0)
                    scn.segment_size =
                        static_cast<size_t>(cfg.get_int("sim", "segment_size", scn.segment_size));
                if (opt_stagger->count() == 0)
                    scn.stagger_us =
                        static_cast<uint64_t>(cfg.get_int("sim", "stagger_us", scn.stagger_us));
                if (opt_window->count() == 0)
                    scn.window = static_cast<int>(cfg.get_int("sim", "window", scn.window));
                if (opt_cs->count() == 0)
                    scn.cs_capacity =
                        static_cast<size_t>(cfg.get_int("sim", "cs_capacity", scn.cs_capacity));
                if (opt_loss->count() == 0)
                    scn.loss_rate = std::stod(cfg.get("sim", "loss_rate", "0"));
                if (opt_seed->count() == 0)
                    sim_seed = static_cast<uint64_t>(cfg.get_int("sim", "seed", sim_seed));
                scn.auth = cfg.get_bool("sim", "auth", scn.auth);
                scn.revocation = cfg.get_bool("sim", "revocation", scn.revocation);
            }
            if (scenario == "i") {
                scn.auth = false;
                scn.revocation = false;
            } else if (scenario == "ii") {
                scn.auth = true;
                scn.revocation = false;
            } else if (scenario == "iii") {
                scn.auth = true;
                scn.revocation = true;
            } else if (!scenario.empty() && scenario != "custom") {
                throw ParseError("scenario must be i, ii, iii or custom");
            }
            if (const char* env = env_seed_override(); env != nullptr && opt_seed->count() == 0)
                sim_seed = std::stoull(env);
            return cmd_sim(topo_path, scn, sim_seed, out_dir);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
