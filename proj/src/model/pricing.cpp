#include "mirrorbench/model/pricing.hpp"

#include "mirrorbench/common/errors.hpp"

namespace mirrorbench::model {

PricingTable builtin_pricing() {
    PricingTable table;
    table.rows["gpt-4o"] = {2.50, 10.00};
    table.rows["gpt-5"] = {1.25, 10.00};
    table.rows["claude-4-sonnet"] = {3.00, 15.00};
    table.rows["gemini-2.5-pro"] = {1.25, 10.00};
    return table;
}

double cost_usd(const Usage& usage, const std::string& model, const PricingTable& pricing) {
    const auto it = pricing.rows.find(model);
    if (it == pricing.rows.end()) {
        throw MissingPricingError("no pricing row for model: " + model);
    }
    const ModelPrice& price = it->second;
    return (static_cast<double>(usage.input_tokens) * price.input_usd_per_million +
            static_cast<double>(usage.output_tokens) * price.output_usd_per_million) /
           1e6;
}

std::optional<double> try_cost_usd(const Usage& usage, const std::string& model,
                                   const PricingTable& pricing) {
    if (pricing.rows.find(model) == pricing.rows.end()) return std::nullopt;
    return cost_usd(usage, model, pricing);
}

}  // namespace mirrorbench::model
