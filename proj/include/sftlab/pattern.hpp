#pragma once
// Alphabets and patterns (finite partial configurations site -> letter).

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sftlab/geometry.hpp"

namespace sftlab {

/// Letters are dense indices 0..size-1; labels are for display and I/O only.
class Alphabet {
  public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
        if (labels_.empty()) throw std::invalid_argument("alphabet must be nonempty");
        if (labels_.size() > 64) throw std::invalid_argument("alphabet limited to 64 letters");
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            if (!index_.emplace(labels_[i], static_cast<int>(i)).second)
                throw std::invalid_argument("duplicate alphabet label: " + labels_[i]);
        }
    }

    static Alphabet numeric(int size) {
        std::vector<std::string> labels;
        for (int i = 0; i < size; ++i) labels.push_back(std::to_string(i));
        return Alphabet(std::move(labels));
    }

    int size() const { return static_cast<int>(labels_.size()); }
    const std::string& label(int i) const { return labels_.at(static_cast<std::size_t>(i)); }
    const std::vector<std::string>& labels() const { return labels_; }

    std::optional<int> index_of(const std::string& label) const {
        auto it = index_.find(label);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool operator==(const Alphabet& o) const { return labels_ == o.labels_; }

  private:
    std::vector<std::string> labels_;
    std::map<std::string, int> index_;
};

/// A configuration on a finite shape; letters_ aligns with the shape's
/// canonical site order.
class Pattern {
  public:
    Pattern() = default;
    Pattern(Shape shape, std::vector<int> letters)
        : shape_(std::move(shape)), letters_(std::move(letters)) {
        if (shape_.size() != letters_.size())
            throw std::invalid_argument("pattern shape/letter count mismatch");
    }

    static Pattern single(const Site& p, int letter) {
        return Pattern(Shape({p}), {letter});
    }

    static Pattern constant(const Shape& s, int letter) {
        return Pattern(s, std::vector<int>(s.size(), letter));
    }

    const Shape& shape() const { return shape_; }
    const std::vector<int>& letters() const { return letters_; }
    std::size_t size() const { return shape_.size(); }
    bool empty() const { return shape_.empty(); }

    int at(const Site& p) const {
        auto i = shape_.index_of(p);
        if (!i) throw std::out_of_range("pattern: site not in shape");
        return letters_[*i];
    }

    std::optional<int> try_at(const Site& p) const {
        auto i = shape_.index_of(p);
        if (!i) return std::nullopt;
        return letters_[*i];
    }

    Pattern restrict_to(const Shape& s) const {
        std::vector<Site> sites;
        std::vector<int> vals;
        for (const Site& p : shape_)
            if (s.contains(p)) {
                sites.push_back(p);
                vals.push_back(at(p));
            }
        return Pattern(Shape(std::move(sites)), std::move(vals));
    }

    Pattern erase(const Site& p) const {
        std::vector<Site> sites;
        std::vector<int> vals;
        for (std::size_t i = 0; i < shape_.size(); ++i)
            if (shape_.at(i) != p) {
                sites.push_back(shape_.at(i));
                vals.push_back(letters_[i]);
            }
        return Pattern(Shape(std::move(sites)), std::move(vals));
    }

    Pattern translate(const Site& t) const {
        Shape s = shape_.translate(t);
        std::vector<int> vals(s.size());
        for (std::size_t i = 0; i < shape_.size(); ++i) {
            auto j = s.index_of(shape_.at(i) + t);
            vals[*j] = letters_[i];
        }
        return Pattern(std::move(s), std::move(vals));
    }

    /// Translate so the coordinate-wise min corner sits at the origin.
    Pattern normalize() const {
        if (empty()) return *this;
        Site m = shape_.min_corner();
        for (Coord& c : m) c = -c;
        return translate(m);
    }

    /// Union of two patterns; disengaged when they disagree on a shared site.
    std::optional<Pattern> merge(const Pattern& o) const {
        std::vector<Site> sites = shape_.sites();
        for (const Site& p : o.shape()) sites.push_back(p);
        Shape s((std::vector<Site>(sites)));
        std::vector<int> vals(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            auto a = try_at(s.at(i));
            auto b = o.try_at(s.at(i));
            if (a && b && *a != *b) return std::nullopt;
            vals[i] = a ? *a : *b;
        }
        return Pattern(std::move(s), std::move(vals));
    }

    /// Sites of the common shape where the two patterns differ.
    Shape disagreement(const Pattern& o) const {
        std::vector<Site> v;
        for (const Site& p : shape_) {
            auto b = o.try_at(p);
            if (b && *b != at(p)) v.push_back(p);
        }
        return Shape(std::move(v));
    }

    bool operator==(const Pattern& o) const {
        return shape_ == o.shape_ && letters_ == o.letters_;
    }
    bool operator!=(const Pattern& o) const { return !(*this == o); }

    bool operator<(const Pattern& o) const {
        if (shape_.sites() != o.shape_.sites()) return shape_.sites() < o.shape_.sites();
        return letters_ < o.letters_;
    }

  private:
    Shape shape_;
    std::vector<int> letters_;
};

inline std::size_t hash_value(const Pattern& p) {
    std::size_t h = 1469598103934665603ull;
    auto mix = [&h](std::size_t v) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    for (const Site& s : p.shape())
        for (Coord c : s) mix(static_cast<std::size_t>(c));
    for (int l : p.letters()) mix(static_cast<std::size_t>(l));
    return h;
}

struct PatternHash {
    std::size_t operator()(const Pattern& p) const { return hash_value(p); }
};

}  // namespace sftlab
