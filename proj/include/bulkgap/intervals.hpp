#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace bulkgap {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }  // closed
    bool contains_interior(double x) const { return x > lo && x < hi; }
};

// Finite union of disjoint closed intervals, kept sorted by left endpoint.
class IntervalUnion {
public:
    IntervalUnion() = default;
    IntervalUnion(double lo, double hi) { parts_.push_back({lo, hi}); validate(); }
    explicit IntervalUnion(std::vector<Interval> parts) : parts_(std::move(parts)) {
        std::sort(parts_.begin(), parts_.end(),
                  [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        validate();
    }

    const std::vector<Interval>& parts() const { return parts_; }
    std::size_t size() const { return parts_.size(); }
    bool empty() const { return parts_.empty(); }
    const Interval& operator[](std::size_t i) const { return parts_[i]; }

    bool contains(double x) const {
        for (const auto& p : parts_)
            if (p.contains(x)) return true;
        return false;
    }
    bool contains_interior(double x) const {
        for (const auto& p : parts_)
            if (p.contains_interior(x)) return true;
        return false;
    }
    // index of the component containing x (closed), or -1
    int component_of(double x) const {
        for (std::size_t i = 0; i < parts_.size(); ++i)
            if (parts_[i].contains(x)) return (int)i;
        return -1;
    }
    double total_length() const {
        double s = 0;
        for (const auto& p : parts_) s += p.length();
        return s;
    }
    // endpoints of all components, i.e. the boundary of the union
    std::vector<double> endpoints() const {
        std::vector<double> e;
        for (const auto& p : parts_) { e.push_back(p.lo); e.push_back(p.hi); }
        return e;
    }

    // "lo:hi,lo:hi" with components in increasing order
    static IntervalUnion parse(const std::string& text) {
        std::vector<Interval> parts;
        std::size_t pos = 0;
        while (pos < text.size()) {
            std::size_t comma = text.find(',', pos);
            std::string piece = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            std::size_t colon = piece.find(':');
            if (colon == std::string::npos)
                throw std::invalid_argument("interval component '" + piece + "' is not of the form lo:hi");
            std::size_t used1 = 0, used2 = 0;
            double lo, hi;
            try {
                lo = std::stod(piece.substr(0, colon), &used1);
                hi = std::stod(piece.substr(colon + 1), &used2);
            } catch (const std::exception&) {
                throw std::invalid_argument("cannot parse interval component '" + piece + "'");
            }
            if (used1 != colon || used2 != piece.size() - colon - 1)
                throw std::invalid_argument("trailing characters in interval component '" + piece + "'");
            parts.push_back({lo, hi});
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (parts.empty()) throw std::invalid_argument("empty interval list");
        return IntervalUnion(std::move(parts));
    }

    std::string str() const {
        std::string out;
        char buf[64];
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (i) out += ',';
            std::snprintf(buf, sizeof buf, "%.17g:%.17g", parts_[i].lo, parts_[i].hi);
            out += buf;
        }
        return out;
    }

private:
    void validate() const {
        for (const auto& p : parts_) {
            if (!(p.lo < p.hi) || !std::isfinite(p.lo) || !std::isfinite(p.hi))
                throw std::invalid_argument("interval [" + std::to_string(p.lo) + "," +
                                            std::to_string(p.hi) + "] is not a nondegenerate finite interval");
        }
        for (std::size_t i = 1; i < parts_.size(); ++i)
            if (!(parts_[i - 1].hi < parts_[i].lo))
                throw std::invalid_argument("interval components overlap or touch");
    }

    std::vector<Interval> parts_;
};

} // namespace bulkgap
