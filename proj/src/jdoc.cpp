#include <infodecomp/jdoc.hpp>

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace infodecomp {

JDoc JDoc::boolean(bool v) {
    JDoc d;
    d.kind_ = Kind::boolean;
    d.bool_ = v;
    return d;
}

JDoc JDoc::integer(long long v) {
    JDoc d;
    d.kind_ = Kind::integer;
    d.int_ = v;
    return d;
}

JDoc JDoc::real(double v) {
    JDoc d;
    d.kind_ = Kind::real;
    d.real_ = v;
    return d;
}

JDoc JDoc::string(std::string v) {
    JDoc d;
    d.kind_ = Kind::string;
    d.str_ = std::move(v);
    return d;
}

JDoc JDoc::array() {
    JDoc d;
    d.kind_ = Kind::array;
    return d;
}

JDoc JDoc::object() {
    JDoc d;
    d.kind_ = Kind::object;
    return d;
}

JDoc& JDoc::push(JDoc v) {
    items_.push_back(std::move(v));
    return items_.back();
}

JDoc& JDoc::set(const std::string& key, JDoc v) {
    for (auto& [k, val] : members_) {
        if (k == key) {
            val = std::move(v);
            return val;
        }
    }
    members_.emplace_back(key, std::move(v));
    return members_.back().second;
}

JDoc* JDoc::find(const std::string& key) {
    for (auto& [k, val] : members_) {
        if (k == key) return &val;
    }
    return nullptr;
}

std::size_t JDoc::size() const { return kind_ == Kind::array ? items_.size() : members_.size(); }

JDoc& JDoc::at(std::size_t i) { return items_[i]; }

namespace {

void escape_string(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

}  // namespace

void JDoc::render_to(std::string& out, int indent) const {
    const auto pad = [&](int level) { out.append(static_cast<std::size_t>(level) * 2, ' '); };
    switch (kind_) {
        case Kind::null: out += "null"; break;
        case Kind::boolean: out += bool_ ? "true" : "false"; break;
        case Kind::integer: out += std::to_string(int_); break;
        case Kind::real: {
            if (!std::isfinite(real_)) {
                out += "null";
                break;
            }
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.16e", real_);
            out += buf;
            break;
        }
        case Kind::string: escape_string(out, str_); break;
        case Kind::array: {
            if (items_.empty()) {
                out += "[]";
                break;
            }
            // scalar-only arrays render on one line for diffability
            bool scalars = true;
            for (const auto& v : items_)
                if (v.kind_ == Kind::array || v.kind_ == Kind::object) scalars = false;
            out += '[';
            for (std::size_t i = 0; i < items_.size(); ++i) {
                if (!scalars) {
                    out += '\n';
                    pad(indent + 1);
                }
                items_[i].render_to(out, indent + 1);
                if (i + 1 < items_.size()) out += scalars ? ", " : ",";
            }
            if (!scalars) {
                out += '\n';
                pad(indent);
            }
            out += ']';
            break;
        }
        case Kind::object: {
            if (members_.empty()) {
                out += "{}";
                break;
            }
            out += '{';
            for (std::size_t i = 0; i < members_.size(); ++i) {
                out += '\n';
                pad(indent + 1);
                escape_string(out, members_[i].first);
                out += ": ";
                members_[i].second.render_to(out, indent + 1);
                if (i + 1 < members_.size()) out += ',';
            }
            out += '\n';
            pad(indent);
            out += '}';
            break;
        }
    }
}

std::string JDoc::render() const {
    std::string out;
    render_to(out, 0);
    out += '\n';
    return out;
}

std::uint64_t fnv1a64(const std::string& payload) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : payload) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fnv1a64_hex(const std::string& payload) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(payload)));
    return std::string(buf);
}

}  // namespace infodecomp
