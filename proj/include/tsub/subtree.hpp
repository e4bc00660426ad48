#pragma once

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsub/errors.hpp"

// The time-based subscription access policy tree: one year split into
// 12 months x 4 weeks x 7 days (idealized calendar). Real dates map onto it
// through date_to_leaf, which clamps days 29-31 into the fourth week.
namespace tsub {

enum class NodeLevel : uint8_t { root = 0, month = 1, week = 2, day = 3 };

struct Date {
    int year = 0;
    int month = 0;  // 1..12
    int day = 0;    // 1..31

    auto operator<=>(const Date&) const = default;
};

inline Date parse_date(const std::string& s) {
    // "YYYY-MM-DD"
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') throw ParseError("date must be YYYY-MM-DD");
    auto num = [&](size_t off, size_t len) {
        int v = 0;
        auto res = std::from_chars(s.data() + off, s.data() + off + len, v);
        if (res.ec != std::errc() || res.ptr != s.data() + off + len)
            throw ParseError("date must be YYYY-MM-DD");
        return v;
    };
    Date d{num(0, 4), num(5, 2), num(8, 2)};
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31)
        throw ParseError("date out of range: " + s);
    return d;
}

struct NodeId {
    std::string label;  // "y2023", "m8", "m8w3", "m8w3d6"
    NodeLevel level = NodeLevel::root;
    int month = 0;  // 1..12 for month/week/day
    int week = 0;   // 1..4  for week/day
    int day = 0;    // 1..7  for day

    bool operator==(const NodeId& o) const { return label == o.label; }

    bool is_ancestor_of(const NodeId& o) const {
        if (level >= o.level) return false;
        switch (level) {
            case NodeLevel::root: return true;
            case NodeLevel::month: return month == o.month;
            case NodeLevel::week: return month == o.month && week == o.week;
            default: return false;
        }
    }

    // index of the first / last covered leaf, 0..335
    int first_leaf() const {
        switch (level) {
            case NodeLevel::root: return 0;
            case NodeLevel::month: return (month - 1) * 28;
            case NodeLevel::week: return (month - 1) * 28 + (week - 1) * 7;
            default: return (month - 1) * 28 + (week - 1) * 7 + (day - 1);
        }
    }
    int last_leaf() const {
        switch (level) {
            case NodeLevel::root: return 335;
            case NodeLevel::month: return first_leaf() + 27;
            case NodeLevel::week: return first_leaf() + 6;
            default: return first_leaf();
        }
    }
};

class PolicyTree {
public:
    static constexpr int kMonths = 12;
    static constexpr int kWeeksPerMonth = 4;
    static constexpr int kDaysPerWeek = 7;
    static constexpr int kLeafCount = kMonths * kWeeksPerMonth * kDaysPerWeek;  // 336
    static constexpr int kNodeCount = 1 + 12 + 48 + 336;                        // 397

    explicit PolicyTree(int year) : year_(year) {
        nodes_.reserve(kNodeCount);
        nodes_.push_back(root_node(year));
        for (int m = 1; m <= kMonths; ++m) {
            nodes_.push_back(month_node(m));
            for (int w = 1; w <= kWeeksPerMonth; ++w) {
                nodes_.push_back(week_node(m, w));
                for (int d = 1; d <= kDaysPerWeek; ++d) nodes_.push_back(day_node(m, w, d));
            }
        }
    }

    int year() const { return year_; }
    const std::vector<NodeId>& nodes() const { return nodes_; }

    NodeId root() const { return root_node(year_); }

    static NodeId root_node(int year) {
        return {"y" + std::to_string(year), NodeLevel::root, 0, 0, 0};
    }
    static NodeId month_node(int m) {
        return {"m" + std::to_string(m), NodeLevel::month, m, 0, 0};
    }
    static NodeId week_node(int m, int w) {
        return {"m" + std::to_string(m) + "w" + std::to_string(w), NodeLevel::week, m, w, 0};
    }
    static NodeId day_node(int m, int w, int d) {
        return {"m" + std::to_string(m) + "w" + std::to_string(w) + "d" + std::to_string(d),
                NodeLevel::day, m, w, d};
    }

    NodeId leaf_by_index(int idx) const {
        return day_node(idx / 28 + 1, idx % 28 / 7 + 1, idx % 7 + 1);
    }

    NodeId parent(const NodeId& n) const {
        switch (n.level) {
            case NodeLevel::day: return week_node(n.month, n.week);
            case NodeLevel::week: return month_node(n.month);
            case NodeLevel::month: return root();
            default: throw ParseError("root has no parent");
        }
    }

    // Parses a node label of this tree ("y2023" / "m8" / "m8w3" / "m8w3d6").
    NodeId parse_label(const std::string& label) const {
        const NodeId root_id = root();
        if (label == root_id.label) return root_id;
        int m = 0, w = 0, d = 0;
        char tag = 0;
        size_t i = 0;
        auto read_int = [&](int& out) {
            size_t start = i;
            while (i < label.size() && label[i] >= '0' && label[i] <= '9') ++i;
            if (start == i) throw ParseError("bad node label: " + label);
            out = std::stoi(label.substr(start, i - start));
        };
        if (i >= label.size() || label[i] != 'm') throw ParseError("bad node label: " + label);
        ++i;
        read_int(m);
        if (m < 1 || m > kMonths) throw ParseError("month out of range in label: " + label);
        if (i == label.size()) return month_node(m);
        tag = label[i++];
        if (tag != 'w') throw ParseError("bad node label: " + label);
        read_int(w);
        if (w < 1 || w > kWeeksPerMonth) throw ParseError("week out of range in label: " + label);
        if (i == label.size()) return week_node(m, w);
        tag = label[i++];
        if (tag != 'd') throw ParseError("bad node label: " + label);
        read_int(d);
        if (d < 1 || d > kDaysPerWeek || i != label.size())
            throw ParseError("bad node label: " + label);
        return day_node(m, w, d);
    }

private:
    int year_;
    std::vector<NodeId> nodes_;
};

struct CoverSet {
    std::vector<NodeId> nodes;  // antichain, left-to-right leaf order

    bool contains(const NodeId& n) const {
        return std::any_of(nodes.begin(), nodes.end(), [&](const NodeId& c) { return c == n; });
    }
};

struct PolicyPath {
    std::vector<NodeId> nodes;  // [day, week, month, root]
};

inline NodeId date_to_leaf(const Date& date, const PolicyTree& tree) {
    if (date.year != tree.year())
        throw YearMismatch("date year " + std::to_string(date.year) + " does not match tree year " +
                           std::to_string(tree.year()));
    int week = std::min((date.day + 6) / 7, PolicyTree::kWeeksPerMonth);
    int day = std::min(date.day - 7 * (week - 1), PolicyTree::kDaysPerWeek);
    return PolicyTree::day_node(date.month, week, day);
}

inline PolicyPath policy_path(const Date& date, const PolicyTree& tree) {
    NodeId leaf = date_to_leaf(date, tree);
    return {{leaf, tree.parent(leaf), PolicyTree::month_node(leaf.month), tree.root()}};
}

inline PolicyPath path_from_leaf(const NodeId& leaf, const PolicyTree& tree) {
    if (leaf.level != NodeLevel::day) throw ParseError("policy path must start at a day leaf");
    return {{leaf, PolicyTree::week_node(leaf.month, leaf.week), PolicyTree::month_node(leaf.month),
             tree.root()}};
}

// Canonical minimum cover: mark the leaf interval, then replace every
// complete sibling group by its parent, bottom-up.
inline CoverSet min_cover(const NodeId& start, const NodeId& end, const PolicyTree& tree) {
    if (start.level != NodeLevel::day || end.level != NodeLevel::day)
        throw InvalidRange("cover bounds must be day leaves");
    int lo = start.first_leaf(), hi = end.first_leaf();
    if (lo > hi) throw InvalidRange("start leaf is after end leaf");

    std::vector<bool> leaf(PolicyTree::kLeafCount, false);
    for (int i = lo; i <= hi; ++i) leaf[i] = true;

    CoverSet out;
    bool all_months = true;
    std::vector<NodeId> pending;
    for (int m = 1; m <= PolicyTree::kMonths; ++m) {
        bool full_month = true;
        std::vector<NodeId> month_part;
        for (int w = 1; w <= PolicyTree::kWeeksPerMonth; ++w) {
            bool full_week = true;
            std::vector<NodeId> week_part;
            for (int d = 1; d <= PolicyTree::kDaysPerWeek; ++d) {
                if (leaf[PolicyTree::day_node(m, w, d).first_leaf()])
                    week_part.push_back(PolicyTree::day_node(m, w, d));
                else
                    full_week = false;
            }
            if (full_week) {
                month_part.push_back(PolicyTree::week_node(m, w));
            } else {
                full_month = false;
                month_part.insert(month_part.end(), week_part.begin(), week_part.end());
            }
        }
        if (full_month) {
            pending.push_back(PolicyTree::month_node(m));
        } else {
            all_months = false;
            pending.insert(pending.end(), month_part.begin(), month_part.end());
        }
    }
    if (all_months)
        out.nodes = {tree.root()};
    else
        out.nodes = std::move(pending);
    return out;
}

inline CoverSet min_cover(const Date& start, const Date& end, const PolicyTree& tree) {
    return min_cover(date_to_leaf(start, tree), date_to_leaf(end, tree), tree);
}

// The unique node lying on both the cover (an antichain) and the path
// (a chain), if any.
inline std::optional<NodeId> covers(const CoverSet& cover, const PolicyPath& path) {
    for (const NodeId& p : path.nodes)
        if (cover.contains(p)) return p;
    return std::nullopt;
}

}  // namespace tsub
