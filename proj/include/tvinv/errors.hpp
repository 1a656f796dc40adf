#pragma once

#include <stdexcept>
#include <string>

namespace tvinv {

/// Precondition violated by caller-supplied values (bad level, color, range).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Internal invariant broken at runtime (phase residue, census drift).
/// Indicates a bug, not bad input.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

enum class ManifestErrorKind {
    Syntax,
    UnknownField,
    MissingField,
    IndexOutOfRange,
    MalformedPermutation,
    UnpairedFace,
    DuplicateFace,
    SelfGluedFace,
    NonInvolutive,
    NonOrientable,
    InvalidEdge,
    BadVertexLink,
    MetadataMismatch,
    MetadataRequired,
};

inline const char* to_string(ManifestErrorKind kind)
{
    switch (kind) {
    case ManifestErrorKind::Syntax: return "syntax error";
    case ManifestErrorKind::UnknownField: return "unknown field";
    case ManifestErrorKind::MissingField: return "missing field";
    case ManifestErrorKind::IndexOutOfRange: return "index out of range";
    case ManifestErrorKind::MalformedPermutation: return "malformed permutation";
    case ManifestErrorKind::UnpairedFace: return "unpaired face";
    case ManifestErrorKind::DuplicateFace: return "face glued more than once";
    case ManifestErrorKind::SelfGluedFace: return "face glued to itself";
    case ManifestErrorKind::NonInvolutive: return "non-involutive gluing";
    case ManifestErrorKind::NonOrientable: return "non-orientable triangulation";
    case ManifestErrorKind::InvalidEdge: return "edge identified with itself in reverse";
    case ManifestErrorKind::BadVertexLink: return "bad vertex link";
    case ManifestErrorKind::MetadataMismatch: return "metadata mismatch";
    case ManifestErrorKind::MetadataRequired: return "metadata required";
    }
    return "manifest error";
}

/// Rejected triangulation data. `kind()` distinguishes the diagnostics;
/// `what()` always starts with the kind's text.
class ManifestError : public std::invalid_argument {
public:
    ManifestError(ManifestErrorKind kind, const std::string& detail)
        : std::invalid_argument(detail.empty() ? std::string(to_string(kind))
                                               : std::string(to_string(kind)) + ": " + detail),
          kind_(kind)
    {
    }

    ManifestErrorKind kind() const noexcept { return kind_; }

private:
    ManifestErrorKind kind_;
};

} // namespace tvinv
