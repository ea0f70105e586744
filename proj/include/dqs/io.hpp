#ifndef DQS_IO_HPP
#define DQS_IO_HPP

#include <json.hpp>

#include "dqs/gauge.hpp"

namespace dqs::io {

using nlohmann::json;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// complex rationals as {"re":"p/q","im":"p/q"}
json toJson(const ExactComplex& c);
ExactComplex exactFromJson(const json& j);

// Laurent polynomials as {"exponent": coefficient} maps
json toJson(const ExactPoly& p);
ExactPoly polyFromJson(const json& j);

// rational functions as {"num": poly, "den": poly}; "den" optional on read
json toJson(const RatFunc& f);
RatFunc ratFromJson(const json& j);

// matrices row-major
json toJson(const ExactPolyMatrix& m);
ExactPolyMatrix polyMatFromJson(const json& j);
json toJson(const Matrix<RatFunc>& m);
Matrix<RatFunc> ratMatFromJson(const json& j);

// big floats as decimal strings with the precision recorded alongside
json toJson(const BigComplex& z);

/// Parsed system file: kind "difference" with coefficient matrices A_0..A_r,
/// or kind "qdifference" with q and the Laurent matrix.
struct SystemInput {
    SystemKind kind = SystemKind::difference;
    ExactComplex q;
    ExactPolyMatrix M;
};

SystemInput systemFromJson(const json& j);
json toJson(const SystemInput& s);

json toJson(const GaugeLog& log);
GaugeLog gaugeLogFromJson(const json& j);

/// Parses a whole document, mapping json errors to ParseError with location.
json parseDocument(const std::string& text);

}  // namespace dqs::io

#endif
