#ifndef GRAPHENE_ERRORS_HPP
#define GRAPHENE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace graphene {

enum class ErrorKind {
    invalid_argument,
    invalid_config,
    key_generation,
    chain_exhausted,
    out_of_window,
    reuse,
    window_mismatch,
    oversize,
    padding,
    sync,
    verification_failed,
    decode,
    encode,
    forbidden,
    io,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::invalid_argument: return "invalid-argument";
        case ErrorKind::invalid_config: return "invalid-config";
        case ErrorKind::key_generation: return "key-generation-error";
        case ErrorKind::chain_exhausted: return "chain-exhausted";
        case ErrorKind::out_of_window: return "out-of-window";
        case ErrorKind::reuse: return "reuse-error";
        case ErrorKind::window_mismatch: return "window-mismatch";
        case ErrorKind::oversize: return "oversize-error";
        case ErrorKind::padding: return "padding-error";
        case ErrorKind::sync: return "sync-error";
        case ErrorKind::verification_failed: return "verification-failed";
        case ErrorKind::decode: return "decode-error";
        case ErrorKind::encode: return "encode-error";
        case ErrorKind::forbidden: return "forbidden";
        case ErrorKind::io: return "io-error";
    }
    return "error";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what),
          kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace graphene

#endif
