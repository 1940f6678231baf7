#ifndef TAMB_ERRORS_HPP
#define TAMB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tamb {

struct Error : std::runtime_error {
    explicit Error(const std::string& m) : std::runtime_error(m) {}
};

struct NotAGroup : Error {
    explicit NotAGroup(const std::string& m) : Error("NotAGroup: " + m) {}
};
struct NotASubgroupChain : Error {
    explicit NotASubgroupChain(const std::string& m) : Error("NotASubgroupChain: " + m) {}
};
struct GroupMismatch : Error {
    explicit GroupMismatch(const std::string& m) : Error("GroupMismatch: " + m) {}
};
struct SubgroupMismatch : Error {
    explicit SubgroupMismatch(const std::string& m) : Error("SubgroupMismatch: " + m) {}
};
struct SignatureMismatch : Error {
    explicit SignatureMismatch(const std::string& m) : Error("SignatureMismatch: " + m) {}
};
struct TruncationTooLarge : Error {
    explicit TruncationTooLarge(const std::string& m) : Error("TruncationTooLarge: " + m) {}
};
struct NotDedekind : Error {
    explicit NotDedekind(const std::string& m) : Error("NotDedekind: " + m) {}
};
struct ChainViolation : Error {
    explicit ChainViolation(const std::string& m) : Error("ChainViolation: " + m) {}
};
struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& m) : Error("DimensionMismatch: " + m) {}
};
struct NotGreen : Error {
    explicit NotGreen(const std::string& m) : Error("NotGreen: " + m) {}
};
struct LevelMismatch : Error {
    explicit LevelMismatch(const std::string& m) : Error("LevelMismatch: " + m) {}
};
struct UnsupportedGroup : Error {
    explicit UnsupportedGroup(const std::string& m) : Error("UnsupportedGroup: " + m) {}
};
struct UsageError : Error {
    explicit UsageError(const std::string& m) : Error("UsageError: " + m) {}
};

} // namespace tamb

#endif
