#pragma once

#include <stdexcept>
#include <string>

namespace bgpsim {

/** Malformed input text (topology file, CSV, JSON). Message carries the
 *  offending line or field so the CLI can surface it verbatim. */
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/** Bad configuration: unknown keys, impossible option combinations,
 *  empty deployment sets, missing files. Maps to CLI exit code 2. */
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/** Structural problems in a relationship graph: provider/customer cycles,
 *  conflicting duplicate edges, clique members that are not pairwise peers. */
class TopologyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/** Propagation engine failure, e.g. a RIB that keeps oscillating past the
 *  round limit. Maps to CLI exit code 1 (or a failed trial inside a sweep). */
class EngineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/** A graph unfit for the requested attack setup, e.g. fewer than two
 *  eligible victim/attacker candidates. */
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bgpsim
