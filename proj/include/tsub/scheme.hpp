#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tsub/aead.hpp"
#include "tsub/algebra.hpp"
#include "tsub/bytes.hpp"
#include "tsub/errors.hpp"
#include "tsub/rng.hpp"
#include "tsub/siff.hpp"
#include "tsub/subtree.hpp"

// The five-phase construction: producer setup, consumer registration, data
// publication, anonymous interest signing with edge-router verification, and
// decryption.
namespace tsub {

struct PublicParams {
    G1Element g;
    GTElement y1;  // e(g,g)^kappa
    GTElement y2;  // e(g,g)^varkappa
    uint64_t delta_t = 10;  // freshness window, seconds
    std::string h1_id = "SHA-256";
    std::string h2_id = "SHA-256/unused";  // declared in the parameters, used nowhere

    GTElement e_gg;  // pair(g, g), derived; cached for exponentiations

    void serialize(ByteWriter& w) const {
        w.raw(as_bytes("TSPP"));
        w.u8(1);
        w.u64(delta_t);
        w.str(h1_id);
        w.str(h2_id);
        w.raw(g.to_bytes());
        w.raw(y1.to_bytes());
        w.raw(y2.to_bytes());
    }

    static PublicParams parse(ByteReader& r) {
        auto magic = r.raw(4);
        if (!std::equal(magic.begin(), magic.end(), "TSPP")) throw Malformed("not a TSPP blob");
        if (r.u8() != 1) throw Malformed("unsupported TSPP version");
        PublicParams pp;
        pp.delta_t = r.u64();
        pp.h1_id = r.str();
        pp.h2_id = r.str();
        pp.g = G1Element::from_bytes(r.raw(G1_BYTES));
        pp.y1 = GTElement::from_bytes(r.raw(GT_BYTES));
        pp.y2 = GTElement::from_bytes(r.raw(GT_BYTES));
        pp.e_gg = pair(pp.g, pp.g);
        return pp;
    }
};

struct MasterSecret {
    Scalar sigma;
    Scalar delta;
    Scalar kappa;
    Scalar varkappa;
    std::vector<std::pair<std::string, Scalar>> node_secrets;  // label -> eta_i

    const Scalar& eta(const std::string& label) const {
        for (const auto& [l, s] : node_secrets)
            if (l == label) return s;
        throw ParseError("no node secret for label " + label);
    }

    bool has_node(const std::string& label) const {
        for (const auto& [l, s] : node_secrets)
            if (l == label) return true;
        return false;
    }

    void serialize(ByteWriter& w) const {
        w.raw(as_bytes("TSMS"));
        w.u8(1);
        w.raw(sigma.to_bytes());
        w.raw(delta.to_bytes());
        w.raw(kappa.to_bytes());
        w.raw(varkappa.to_bytes());
        w.u16(static_cast<uint16_t>(node_secrets.size()));
        for (const auto& [label, eta] : node_secrets) {
            w.str(label);
            w.raw(eta.to_bytes());
        }
    }

    static MasterSecret parse(ByteReader& r) {
        auto magic = r.raw(4);
        if (!std::equal(magic.begin(), magic.end(), "TSMS")) throw Malformed("not a TSMS blob");
        if (r.u8() != 1) throw Malformed("unsupported TSMS version");
        MasterSecret ms;
        ms.sigma = Scalar::from_bytes(r.raw(SCALAR_BYTES));
        ms.delta = Scalar::from_bytes(r.raw(SCALAR_BYTES));
        ms.kappa = Scalar::from_bytes(r.raw(SCALAR_BYTES));
        ms.varkappa = Scalar::from_bytes(r.raw(SCALAR_BYTES));
        uint16_t n = r.u16();
        ms.node_secrets.reserve(n);
        for (uint16_t i = 0; i < n; ++i) {
            std::string label = r.str();
            ms.node_secrets.emplace_back(label, Scalar::from_bytes(r.raw(SCALAR_BYTES)));
        }
        return ms;
    }
};

struct NodeToken {
    NodeId node;
    G1Element tk1;
    G1Element tk2;
};

struct ConsumerKey {
    Bytes consumer_id;
    Scalar uk;
    std::vector<NodeToken> tokens;  // one per minimum-cover node, leaf order

    CoverSet cover() const {
        CoverSet cs;
        cs.nodes.reserve(tokens.size());
        for (const auto& t : tokens) cs.nodes.push_back(t.node);
        return cs;
    }

    const NodeToken* token_for(const std::string& label) const {
        for (const auto& t : tokens)
            if (t.node.label == label) return &t;
        return nullptr;
    }

    // UK || count || repeated (label, TK1, TK2); the consumer id travels
    // outside this blob.
    void serialize(ByteWriter& w) const {
        w.raw(uk.to_bytes());
        w.u16(static_cast<uint16_t>(tokens.size()));
        for (const auto& t : tokens) {
            w.str(t.node.label);
            w.raw(t.tk1.to_bytes());
            w.raw(t.tk2.to_bytes());
        }
    }

    static ConsumerKey parse(ByteReader& r, Bytes consumer_id, const PolicyTree& tree) {
        ConsumerKey key;
        key.consumer_id = std::move(consumer_id);
        key.uk = Scalar::from_bytes(r.raw(SCALAR_BYTES));
        uint16_t n = r.u16();
        key.tokens.reserve(n);
        for (uint16_t i = 0; i < n; ++i) {
            NodeToken t;
            t.node = tree.parse_label(r.str());
            t.tk1 = G1Element::from_bytes(r.raw(G1_BYTES));
            t.tk2 = G1Element::from_bytes(r.raw(G1_BYTES));
            key.tokens.push_back(std::move(t));
        }
        return key;
    }

    // cryptographic element bytes only (Table 1 accounting)
    size_t core_size() const { return SCALAR_BYTES + tokens.size() * 2 * G1_BYTES; }
};

struct Ciphertext {
    std::string content_name;
    GTElement c1;
    std::vector<std::pair<std::string, G1Element>> c_nodes;  // path order: leaf..root
    SiffPolynomial poly;
    Bytes enc_payload;

    void serialize(ByteWriter& w) const {
        w.str(content_name);
        w.raw(c1.to_bytes());
        w.u16(static_cast<uint16_t>(c_nodes.size()));
        for (const auto& [label, c] : c_nodes) {
            w.str(label);
            w.raw(c.to_bytes());
        }
        siff::serialize(poly, w);
        w.var_bytes(enc_payload);
    }

    static Ciphertext parse(ByteReader& r) {
        Ciphertext ct;
        ct.content_name = r.str();
        ct.c1 = GTElement::from_bytes(r.raw(GT_BYTES));
        uint16_t n = r.u16();
        ct.c_nodes.reserve(n);
        for (uint16_t i = 0; i < n; ++i) {
            std::string label = r.str();
            ct.c_nodes.emplace_back(label, G1Element::from_bytes(r.raw(G1_BYTES)));
        }
        ct.poly = siff::parse(r);
        ct.enc_payload = r.var_bytes();
        return ct;
    }

    // header without the DEM payload (the "height file" segment)
    Bytes header_bytes() const {
        Ciphertext hdr = *this;
        hdr.enc_payload.clear();
        ByteWriter w;
        hdr.serialize(w);
        return w.take();
    }

    size_t core_size() const {
        return c_nodes.size() * G1_BYTES + GT_BYTES + (poly.degree() + 1) * SCALAR_BYTES;
    }
};

struct InterestSignature {
    Scalar s1;
    G1Element s2;
    GTElement s3;
    GTElement s4;
    std::string node_label;  // t_i
    uint64_t ts = 0;         // seconds
    std::string content_name;  // carried by the interest itself, not the blob

    void serialize(ByteWriter& w) const {
        w.raw(s1.to_bytes());
        w.raw(s2.to_bytes());
        w.raw(s3.to_bytes());
        w.raw(s4.to_bytes());
        w.str(node_label);
        w.u64(ts);
    }

    Bytes to_bytes() const {
        ByteWriter w;
        serialize(w);
        return w.take();
    }

    static InterestSignature parse(ByteReader& r, std::string content_name) {
        InterestSignature sig;
        sig.s1 = Scalar::from_bytes(r.raw(SCALAR_BYTES));
        sig.s2 = G1Element::from_bytes(r.raw(G1_BYTES));
        sig.s3 = GTElement::from_bytes(r.raw(GT_BYTES));
        sig.s4 = GTElement::from_bytes(r.raw(GT_BYTES));
        sig.node_label = r.str();
        sig.ts = r.u64();
        sig.content_name = std::move(content_name);
        return sig;
    }

    size_t core_size() const { return SCALAR_BYTES + G1_BYTES + 2 * GT_BYTES; }
};

struct ProducerState {
    PublicParams pp;
    MasterSecret ms;
    PolicyTree tree;
};

// H1(ID_u || t_i) and H1(ts || CN) with the length-prefixed segment encoding.
inline Scalar h1_id_node(ByteView id, const std::string& label) {
    return hash_to_scalar(concat_segments({id, as_bytes(label)}));
}

inline Scalar h1_ts_name(uint64_t ts, const std::string& cn) {
    ByteWriter w;
    w.u64(ts);
    return hash_to_scalar(concat_segments({ByteView{w.data()}, as_bytes(cn)}));
}

inline Scalar h1_node(const std::string& label) { return hash_to_scalar(as_bytes(label)); }

inline ProducerState producer_setup(int year, uint64_t delta_t_seconds, Drbg& rng) {
    if (delta_t_seconds == 0) throw InvalidRange("freshness window must be positive");
    ProducerState st{PublicParams{}, MasterSecret{}, PolicyTree(year)};

    st.pp.delta_t = delta_t_seconds;
    st.pp.g = G1Element::generator().pow(Scalar::random(rng));
    st.pp.e_gg = pair(st.pp.g, st.pp.g);

    st.ms.sigma = Scalar::random(rng);
    st.ms.delta = Scalar::random(rng);
    st.ms.kappa = Scalar::random(rng);
    st.ms.varkappa = Scalar::random(rng);
    st.ms.node_secrets.reserve(PolicyTree::kNodeCount);
    for (const NodeId& n : st.tree.nodes())
        st.ms.node_secrets.emplace_back(n.label, Scalar::random(rng));

    st.pp.y1 = st.pp.e_gg.pow(st.ms.kappa);
    st.pp.y2 = st.pp.e_gg.pow(st.ms.varkappa);
    return st;
}

// TK1_i = g^{delta UK / eta_i^2} * g^{sigma H1(ID) / eta_i}
// TK2_i = g^{kappa UK H1(t_i)} * g^{varkappa H1(ID || t_i)}
inline NodeToken make_node_token(const MasterSecret& ms, const PublicParams& pp, ByteView id,
                                 const Scalar& uk, const NodeId& node) {
    const Scalar& eta = ms.eta(node.label);
    Scalar eta_inv = eta.inverse();
    Scalar e1 = ms.delta * uk * eta_inv * eta_inv + ms.sigma * hash_to_scalar(id) * eta_inv;
    Scalar e2 = ms.kappa * uk * h1_node(node.label) + ms.varkappa * h1_id_node(id, node.label);
    return {node, pp.g.pow(e1), pp.g.pow(e2)};
}

inline ConsumerKey register_consumer(const MasterSecret& ms, const PublicParams& pp,
                                     const PolicyTree& tree, ByteView id, const Date& start,
                                     const Date& end, Drbg& rng) {
    if (end < start) throw InvalidRange("subscription end before start");
    CoverSet cover = min_cover(start, end, tree);
    ConsumerKey key;
    key.consumer_id.assign(id.begin(), id.end());
    key.uk = Scalar::random(rng);
    key.tokens.reserve(cover.nodes.size());
    for (const NodeId& n : cover.nodes) key.tokens.push_back(make_node_token(ms, pp, id, key.uk, n));
    return key;
}

// Encryption along an explicit node path; the calendar entry point below
// feeds it policy_path(date). Fresh K and fresh r per call.
inline Ciphertext publish_on_path(const MasterSecret& ms, const PublicParams& pp,
                                  const std::vector<NodeId>& path, const std::string& name,
                                  ByteView plaintext, Drbg& rng, ByteView rekey = {}) {
    if (name.empty()) throw InvalidRange("content name must be nonempty");
    if (path.empty()) throw InvalidRange("policy path must be nonempty");

    Scalar r = Scalar::random(rng);
    Scalar access_key = Scalar::random(rng);

    Ciphertext ct;
    ct.content_name = name;
    ct.c1 = pp.e_gg.pow(ms.sigma * r);
    std::vector<Scalar> roots;
    roots.reserve(path.size());
    for (const NodeId& node : path) {
        const Scalar& eta = ms.eta(node.label);
        ct.c_nodes.emplace_back(node.label, pp.g.pow(eta * r));
        GTElement x_i = pp.e_gg.pow(ms.delta * r * eta.inverse());
        roots.push_back(hash_gt_to_scalar(x_i));
    }
    ct.poly = siff::build(roots, access_key);

    Bytes ikm = access_key.to_bytes();
    ikm.insert(ikm.end(), rekey.begin(), rekey.end());
    ct.enc_payload = aead::seal(aead::derive_key(ikm, name), plaintext, as_bytes(name));
    return ct;
}

inline Ciphertext publish(const MasterSecret& ms, const PublicParams& pp, const PolicyTree& tree,
                          const Date& date, const std::string& name, ByteView plaintext, Drbg& rng,
                          ByteView rekey = {}) {
    return publish_on_path(ms, pp, policy_path(date, tree).nodes, name, plaintext, rng, rekey);
}

// S1 = [UK + H1(ts||CN)/H1(t_i)] v ; S2 = TK2^v ; S3 = Y1^{-v} ;
// S4 = Y2^{v H1(ID||t_i)}
inline InterestSignature sign_interest(const ConsumerKey& key, const PublicParams& pp,
                                       const std::string& cn, uint64_t ts, const PolicyPath& path,
                                       Drbg& rng) {
    auto node = covers(key.cover(), path);
    if (!node)
        throw NoCoverNode("subscription cover does not intersect the content's policy path");
    const NodeToken* token = key.token_for(node->label);

    Scalar v = Scalar::random(rng);
    InterestSignature sig;
    sig.node_label = node->label;
    sig.ts = ts;
    sig.content_name = cn;
    sig.s1 = (key.uk + h1_ts_name(ts, cn) * h1_node(node->label).inverse()) * v;
    sig.s2 = token->tk2.pow(v);
    sig.s3 = pp.y1.pow(v.negate());
    sig.s4 = pp.y2.pow(v * h1_id_node(key.consumer_id, node->label));
    return sig;
}

inline InterestSignature sign_interest(const ConsumerKey& key, const PublicParams& pp,
                                       const std::string& cn, uint64_t ts, const Date& date,
                                       const PolicyTree& tree, Drbg& rng) {
    return sign_interest(key, pp, cn, ts, policy_path(date, tree), rng);
}

enum class VerifyStatus : uint8_t { accept = 0, stale, wrong_node, bad_signature };

struct VerifyResult {
    VerifyStatus status = VerifyStatus::bad_signature;
    bool accepted() const { return status == VerifyStatus::accept; }

    const char* reason() const {
        switch (status) {
            case VerifyStatus::accept: return "accept";
            case VerifyStatus::stale: return "stale";
            case VerifyStatus::wrong_node: return "wrong-node";
            default: return "bad-signature";
        }
    }
};

// Edge-router check: freshness (|now - ts| <= delta_t, boundary inclusive),
// node-on-path, then the pairing identity V3 == V4.
inline VerifyResult verify_interest(const PublicParams& pp, const InterestSignature& sig,
                                    uint64_t now, const PolicyPath& path) {
    uint64_t age = now >= sig.ts ? now - sig.ts : sig.ts - now;
    if (age > pp.delta_t) return {VerifyStatus::stale};

    bool on_path = false;
    for (const NodeId& n : path.nodes)
        if (n.label == sig.node_label) { on_path = true; break; }
    if (!on_path) return {VerifyStatus::wrong_node};

    Scalar h_ti_inv = h1_node(sig.node_label).inverse();
    GTElement v1 = pair(sig.s2, pp.g.pow(h_ti_inv));
    GTElement v2 = pp.y1.pow(sig.s1);
    GTElement v3 = v1 / v2;
    GTElement v4 = sig.s4.pow(h_ti_inv) * sig.s3.pow(h1_ts_name(sig.ts, sig.content_name) * h_ti_inv);
    return {v3 == v4 ? VerifyStatus::accept : VerifyStatus::bad_signature};
}

inline VerifyResult verify_interest(const PublicParams& pp, const InterestSignature& sig,
                                    uint64_t now, const Date& date, const PolicyTree& tree) {
    return verify_interest(pp, sig, now, policy_path(date, tree));
}

// D1 = e(TK1_i, C_i); D2 = D1 / C1^{H1(ID)}; x'_i = D2^{1/UK};
// K = P(H(x'_i)); plaintext = AEAD-open(KDF(K [|| k]), payload).
inline Bytes decrypt(const ConsumerKey& key, const PublicParams& /*pp*/, const Ciphertext& ct,
                     ByteView rekey = {}) {
    const NodeToken* token = nullptr;
    const G1Element* c_i = nullptr;
    for (const auto& [label, c] : ct.c_nodes) {
        if (const NodeToken* t = key.token_for(label)) {
            token = t;
            c_i = &c;
            break;
        }
    }
    if (!token)
        throw NoCoverNode("subscription cover does not intersect the ciphertext's policy path");

    GTElement d1 = pair(token->tk1, *c_i);
    GTElement d2 = d1 / ct.c1.pow(hash_to_scalar(key.consumer_id));
    GTElement x_i = d2.pow(key.uk.inverse());
    Scalar access_key = siff::eval(ct.poly, hash_gt_to_scalar(x_i));

    Bytes ikm = access_key.to_bytes();
    ikm.insert(ikm.end(), rekey.begin(), rekey.end());
    return aead::open(aead::derive_key(ikm, ct.content_name), ct.enc_payload,
                      as_bytes(ct.content_name));
}

// Hierarchical content naming: /<prefix>/<tau leaf label>/<file>/<segment>,
// e.g. "/com/test/m1w1d7/abc.mp4/chunk_1".
struct ContentName {
    std::string prefix;      // "/com/test"
    std::string leaf_label;  // "m1w1d7"
    std::string file;        // "abc.mp4"
    std::string segment;     // "chunk_1"
};

inline std::string make_content_name(const ContentName& cn) {
    return cn.prefix + "/" + cn.leaf_label + "/" + cn.file + "/" + cn.segment;
}

inline ContentName parse_content_name(const std::string& name) {
    // the leaf label is the third-from-last component
    std::vector<size_t> slashes;
    for (size_t i = 0; i < name.size(); ++i)
        if (name[i] == '/') slashes.push_back(i);
    if (name.empty() || name[0] != '/' || slashes.size() < 4)
        throw ParseError("content name must look like /prefix/tau/file/segment: " + name);
    size_t s3 = slashes[slashes.size() - 3], s2 = slashes[slashes.size() - 2],
           s1 = slashes[slashes.size() - 1];
    ContentName cn;
    cn.prefix = name.substr(0, s3);
    cn.leaf_label = name.substr(s3 + 1, s2 - s3 - 1);
    cn.file = name.substr(s2 + 1, s1 - s2 - 1);
    cn.segment = name.substr(s1 + 1);
    if (cn.prefix.empty() || cn.leaf_label.empty() || cn.file.empty() || cn.segment.empty())
        throw ParseError("content name has empty components: " + name);
    return cn;
}

}  // namespace tsub
