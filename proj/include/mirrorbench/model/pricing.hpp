#pragma once

#include <map>
#include <optional>
#include <string>

#include "mirrorbench/model/client.hpp"

namespace mirrorbench::model {

struct ModelPrice {
    double input_usd_per_million = 0.0;
    double output_usd_per_million = 0.0;
};

struct PricingTable {
    std::map<std::string, ModelPrice> rows;
};

// Provider list prices, USD per million tokens.
PricingTable builtin_pricing();

// (input_tokens * price_in + output_tokens * price_out) / 1e6.
// Throws MissingPricingError for a model absent from the table.
double cost_usd(const Usage& usage, const std::string& model, const PricingTable& pricing);

// Variant that reports absence instead of throwing, for telemetry paths that
// must keep recording without a price row.
std::optional<double> try_cost_usd(const Usage& usage, const std::string& model,
                                   const PricingTable& pricing);

}  // namespace mirrorbench::model
