#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcl/problem.hpp"

namespace lcl {

// Complete Delta-ary labeled tree, nested representation.
struct LabeledTree {
    LabelId label = 0;
    std::vector<LabeledTree> children;
};

// Witness that a rooted problem is solvable with O(log* n) locality: two
// sequences of fully labeled complete trees of coprime depths, one tree per
// label of sigma_t, each with its root labeled by that label and all trees of
// a sequence sharing one leaf labeling drawn from sigma_t.
struct Certificate {
    std::vector<LabelId> sigma_t;  // sigma_1 < sigma_2 < ... (ordered label list)
    int d1 = 0;
    int d2 = 0;
    std::vector<LabeledTree> trees1;
    std::vector<LabeledTree> trees2;
    std::vector<LabelId> leaf_pattern1;  // canonical depth-first leaf order
    std::vector<LabelId> leaf_pattern2;
};

struct CertificateViolation {
    int condition = 0;  // 1..5
    std::string message;
};

struct CertificateVerdict {
    bool pass = false;
    std::vector<CertificateViolation> violations;
};

CertificateVerdict verify_certificate(const RootedProblem& p, const Certificate& c);

struct CertSearchBounds {
    int max_depth = 6;
    int max_sigma = -1;  // -1: |Sigma|
    uint64_t expansion_cap = 10'000'000;
};

enum class CertSearchStatus { Found, NotFound, BudgetExceeded };

struct CertSearchResult {
    CertSearchStatus status = CertSearchStatus::NotFound;
    std::optional<Certificate> certificate;
    CertSearchBounds explored;
    uint64_t expansions = 0;
};

// Sound and, within the bounds, complete: label subsets by ascending size,
// coprime depth pairs 2 <= d1 < d2 <= max_depth, leaf patterns through a
// feasible-root-set dynamic program. Deterministic exploration order.
CertSearchResult search_certificate(const RootedProblem& p, const CertSearchBounds& bounds = {});

std::string certificate_to_json(const Certificate& c, const RootedProblem& p);
Certificate certificate_from_json(const std::string& text, const RootedProblem& p);

}  // namespace lcl
