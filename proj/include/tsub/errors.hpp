#pragma once

#include <stdexcept>
#include <string>

namespace tsub {

// Stable error codes; the CLI maps them 1:1 onto process exit codes.
enum class Errc : int {
    ok = 0,
    usage = 2,
    parse_error = 3,
    year_mismatch = 4,
    invalid_range = 5,
    zero_inverse = 6,
    duplicate_root = 7,
    no_cover_node = 8,
    aead_failure = 9,
    stale = 10,
    wrong_node = 11,
    bad_signature = 12,
    malformed = 13,
    pool_exhausted = 14,
    duplicate_consumer = 15,
    too_many_revoked = 16,
    degenerate_share = 17,
    disconnected_graph = 18,
    unsatisfiable = 19,
    io_error = 20,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

#define TSUB_DEFINE_ERROR(Name, code)                                              \
    class Name : public Error {                                                    \
    public:                                                                        \
        explicit Name(const std::string& what) : Error(code, what) {}              \
    }

TSUB_DEFINE_ERROR(ParseError, Errc::parse_error);
TSUB_DEFINE_ERROR(YearMismatch, Errc::year_mismatch);
TSUB_DEFINE_ERROR(InvalidRange, Errc::invalid_range);
TSUB_DEFINE_ERROR(ZeroInverse, Errc::zero_inverse);
TSUB_DEFINE_ERROR(DuplicateRoot, Errc::duplicate_root);
TSUB_DEFINE_ERROR(NoCoverNode, Errc::no_cover_node);
TSUB_DEFINE_ERROR(AeadFailure, Errc::aead_failure);
TSUB_DEFINE_ERROR(Malformed, Errc::malformed);
TSUB_DEFINE_ERROR(PoolExhausted, Errc::pool_exhausted);
TSUB_DEFINE_ERROR(DuplicateConsumer, Errc::duplicate_consumer);
TSUB_DEFINE_ERROR(TooManyRevoked, Errc::too_many_revoked);
TSUB_DEFINE_ERROR(DegenerateShare, Errc::degenerate_share);
TSUB_DEFINE_ERROR(DisconnectedGraph, Errc::disconnected_graph);
TSUB_DEFINE_ERROR(Unsatisfiable, Errc::unsatisfiable);
TSUB_DEFINE_ERROR(IoError, Errc::io_error);

#undef TSUB_DEFINE_ERROR

}  // namespace tsub
