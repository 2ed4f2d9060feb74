// io.hpp
// JSON and CSV encoding of data, matrices and reports. Complex numbers are {"re","im"}.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dynrmat/classifier.hpp"
#include "dynrmat/hecke.hpp"
#include "dynrmat/params.hpp"
#include "dynrmat/rmatrix.hpp"
#include "dynrmat/transforms.hpp"
#include "dynrmat/verifier.hpp"

namespace dynrmat::io {

using json = nlohmann::json;

json to_json(cplx z);
cplx complex_from(const json& j);
json to_json(const CVec& v);
CVec cvec_from(const json& j);

/// Parses "a+bi,c,-di,..." into a vector. Throws InvalidInput on malformed text.
CVec parse_lambda(const std::string& text);
cplx parse_complex(const std::string& text);

json to_json(const IndexPartition& p);
IndexPartition partition_from(const json& j);

json to_json(const ExpPoly& e);
ExpPoly exp_poly_from(const json& j);
/// Trivial, exact and parametric table forms. Function-valued tables serialize as "table" without entries.
json to_json(const TwoFormSpec& g);
TwoFormSpec two_form_from(const json& j, int n);

json to_json(const ClassificationParams& c);
ClassificationParams params_from(const json& j, const IndexPartition& p);

/// Nonzero entries only.
json to_json(const DensePoint& P, double zero = 0.0);
/// Diagonal, d and Delta entries; anything else is rejected as outside the zero-weight pattern.
std::pair<CVec, Coefficients> point_from(const json& j);

struct Perturbation {
    bool on_delta = true;
    int i = 0, j = 0;
    cplx amount{0.0, 0.0};
};

/// Parsed "datum" or "sampled" input.
struct Input {
    bool is_datum = true;
    std::optional<ClassificationParams> params;
    std::vector<Perturbation> perturbations;
    std::vector<CVec> points;  ///< sampled inputs only
    DynamicalRMatrix matrix;
};

Input input_from(const json& j);
/// Reads and parses a file; InvalidInput when unreadable.
json read_json_file(const std::string& path);

json to_json(const ResidualReport& r);
json to_json(const VerifyReport& r);
std::string residual_csv(const ResidualReport& r);
json to_json(const IncidenceReport& r);
json to_json(const RecoveredParams& r);
json to_json(const HeckeReport& r);
json to_json(const LimitReport& r);

}  // namespace dynrmat::io
