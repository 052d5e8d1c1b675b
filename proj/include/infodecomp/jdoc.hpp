#ifndef INFODECOMP_JDOC_HPP
#define INFODECOMP_JDOC_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

// Minimal ordered JSON document builder. nlohmann/json is used for parsing;
// writing goes through this emitter so key order is stable and every real
// value is printed with 17 significant digits (exact double round-trip, and
// more than the 12 the report contract asks for).

namespace infodecomp {

class JDoc {
public:
    enum class Kind { null, boolean, integer, real, string, array, object };

    JDoc() : kind_(Kind::null) {}
    static JDoc boolean(bool v);
    static JDoc integer(long long v);
    static JDoc real(double v);
    static JDoc string(std::string v);
    static JDoc array();
    static JDoc object();

    Kind kind() const { return kind_; }

    // array ops
    JDoc& push(JDoc v);
    // object ops; set replaces an existing key in place (order kept)
    JDoc& set(const std::string& key, JDoc v);
    JDoc* find(const std::string& key);

    std::size_t size() const;
    JDoc& at(std::size_t i);

    std::string render() const;  // compact-ish, two-space indented

private:
    void render_to(std::string& out, int indent) const;

    Kind kind_;
    bool bool_ = false;
    long long int_ = 0;
    double real_ = 0.0;
    std::string str_;
    std::vector<JDoc> items_;
    std::vector<std::pair<std::string, JDoc>> members_;
};

std::uint64_t fnv1a64(const std::string& payload);
std::string fnv1a64_hex(const std::string& payload);

}  // namespace infodecomp

#endif  // INFODECOMP_JDOC_HPP
