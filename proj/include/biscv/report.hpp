#ifndef BISCV_REPORT_HPP
#define BISCV_REPORT_HPP

#include <string>

#include <json.hpp>

#include "biscv/catalog.hpp"
#include "biscv/envelope.hpp"
#include "biscv/fisher.hpp"
#include "biscv/shape.hpp"

namespace biscv::report {

using Json = nlohmann::ordered_json;

/// Finite values as numbers; +-inf as the strings "inf" / "-inf"; NaN as null.
Json real(double v);

/// Grid summary: count, eps and the first and last abscissa.
Json to_json(const shape::Grid& grid);
Json to_json(const shape::Certificate& cert);
Json to_json(const shape::CRReport& rep);
Json to_json(const shape::MaxSResult& res);
Json to_json(const fisher::IntegralValue& v);
Json to_json(const fisher::FisherReport& rep);
Json to_json(const envelope::EnvelopeRow& row);

/// Family name, parameters, support, max_known_s, normalizing constant.
Json catalog_metadata(const catalog::DistributionSpec& d);

/// {"error": {"type": ..., "message": ...}} plus any extra fields.
Json error_document(const std::string& type, const std::string& message,
                    const Json& details = Json::object());

}  // namespace biscv::report

#endif  // BISCV_REPORT_HPP
