#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bgpsim/prefix.hpp"
#include "bgpsim/topology.hpp"

namespace bgpsim {

enum class ValidityState : std::uint8_t { Unknown = 0, Valid = 1, Invalid = 2 };

const char* to_string(ValidityState v);

/// Route Origin Authorization: `origin` may announce prefixes inside
/// `prefix` up to `max_length` specific.
struct ROA {
    Prefix prefix;
    ASNumber origin = 0;
    std::uint8_t max_length = 0;
};

class RoaTable {
public:
    /// Validates origin != 0 and max_length within [prefix.length, 32].
    void add(const ROA& roa);

    /** RFC 6811 style origin validation:
     *  - Unknown when no ROA covers the announced prefix;
     *  - Valid when some covering ROA matches the origin and the announced
     *    length does not exceed its max_length;
     *  - Invalid otherwise. */
    ValidityState validity(const Prefix& prefix, ASNumber origin) const;

    const std::vector<ROA>& entries() const { return entries_; }

private:
    std::vector<ROA> entries_;
};

/// Provider attestations: customer AS -> set of ASes it names as providers.
/// An empty provider set is meaningful ("I have no providers at all").
class AspaTable {
public:
    void add(ASNumber customer, std::vector<ASNumber> providers);
    bool has_record(ASNumber customer) const { return records_.count(customer) != 0; }
    /// nullptr when the customer published nothing.
    const std::vector<ASNumber>* providers_of(ASNumber customer) const;
    std::size_t size() const { return records_.size(); }
    /// Customers with records, sorted (for serialization).
    std::vector<ASNumber> customers() const;

private:
    std::unordered_map<ASNumber, std::vector<ASNumber>> records_;
};

enum class HopAttestation : std::uint8_t { ProviderPlus, NotProviderPlus, NoAttestation };

/// Does `customer`'s published record name `candidate` as a provider?
/// NoAttestation when `customer` published nothing.
HopAttestation hop_attestation(const AspaTable& table, ASNumber customer, ASNumber candidate);

/** Path plausibility for a received route. `path[0]` is the neighbor that
 *  sent it, `path.back()` the origin; `from_rel` is that neighbor's
 *  relationship to the verifying AS.
 *
 *  Routes from customers or peers must climb monotonically from the origin;
 *  routes from providers may climb and then descend (one peak, no valley).
 *  The verdict enumerates ramp splits: Invalid when no split survives even
 *  with unattested hops treated leniently, Valid when some split passes with
 *  every hop explicitly attested, Unknown in between. */
ValidityState aspa_validity(std::span<const ASNumber> path, Relationship from_rel,
                            const AspaTable& table);

/// Records for `registrants` derived from the graph: each one attests
/// exactly its true provider set (possibly empty — top-tier ASes attest
/// having no providers, which is what lets leaks through them be caught).
AspaTable build_aspa_records(const ASGraph& graph, std::span<const ASNumber> registrants);

// JSON round trips, used by RIB dumps and by tests.
std::string roa_table_json(const RoaTable& table);
RoaTable roa_table_from_json(std::string_view text);
std::string aspa_table_json(const AspaTable& table);
AspaTable aspa_table_from_json(std::string_view text);

} // namespace bgpsim
