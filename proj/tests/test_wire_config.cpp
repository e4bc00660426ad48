#include <catch2/catch_amalgamated.hpp>

#include "tsub/bytes.hpp"
#include "tsub/config.hpp"

using namespace tsub;

TEST_CASE("byte reader/writer primitives roundtrip") {
    ByteWriter w;
    w.u8(0xab);
    w.u16(0x1234);
    w.u32(0xdeadbeef);
    w.u64(0x0123456789abcdefULL);
    w.str("hello");
    w.var_bytes(Bytes{9, 8, 7});
    ByteReader r{ByteView{w.data()}};
    REQUIRE(r.u8() == 0xab);
    REQUIRE(r.u16() == 0x1234);
    REQUIRE(r.u32() == 0xdeadbeef);
    REQUIRE(r.u64() == 0x0123456789abcdefULL);
    REQUIRE(r.str() == "hello");
    REQUIRE(r.var_bytes() == Bytes{9, 8, 7});
    REQUIRE(r.done());
    REQUIRE_THROWS_AS(r.u8(), Malformed);
}

TEST_CASE("hex helpers") {
    Bytes b{0x00, 0x1f, 0xff};
    REQUIRE(to_hex(ByteView{b}) == "001fff");
    REQUIRE(from_hex("001fff") == b);
    REQUIRE_THROWS_AS(from_hex("0g"), ParseError);
    REQUIRE_THROWS_AS(from_hex("abc"), ParseError);
}

TEST_CASE("length-prefixed segment concatenation is injective on splits") {
    REQUIRE(concat_segments({as_bytes("ab"), as_bytes("c")}) !=
            concat_segments({as_bytes("a"), as_bytes("bc")}));
    REQUIRE(concat_segments({as_bytes(""), as_bytes("x")}) !=
            concat_segments({as_bytes("x"), as_bytes("")}));
}

TEST_CASE("run config parses sections, comments and values") {
    std::string text =
        "# run configuration\n"
        "seed = 42\n"
        "[sim]\n"
        "topology = data/ndn-testbed.txt\n"
        "consumers = 5\n"
        "auth = true\n"
        "loss_rate = 0.01\n";
    RunConfig cfg = RunConfig::parse(text);
    REQUIRE(cfg.get_int("", "seed", 0) == 42);
    REQUIRE(cfg.get("sim", "topology", "") == "data/ndn-testbed.txt");
    REQUIRE(cfg.get_int("sim", "consumers", 0) == 5);
    REQUIRE(cfg.get_bool("sim", "auth", false));
    REQUIRE(cfg.get("sim", "missing", "fallback") == "fallback");
    REQUIRE_THROWS_AS(cfg.get_int("sim", "topology", 0), ParseError);
    REQUIRE_THROWS_AS(RunConfig::parse("key value without equals\n"), ParseError);
}

TEST_CASE("run config round-trips through the loader unchanged") {
    std::string text =
        "seed = 42\n"
        "[sim]\n"
        "topology = data/ndn-testbed.txt\n"
        "consumers = 5\n"
        "[bench]\n"
        "trials = 20\n";
    RunConfig cfg = RunConfig::parse(text);
    REQUIRE(cfg.serialize() == text);
    RunConfig again = RunConfig::parse(cfg.serialize());
    REQUIRE(again.serialize() == text);
}
