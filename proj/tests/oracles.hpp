// Independent reference implementations the suites compare the library
// against. Everything here is deliberately written from the rule definitions
// alone, not by calling back into the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracles {

// Brute-force k-nearest-neighbour edges: per vertex, sort every other vertex
// by (distance, index) and connect the first min(3, n-1).
inline std::set<std::pair<int, int>> knn_edges(const std::vector<std::pair<double, double>>& pts) {
    std::set<std::pair<int, int>> edges;
    const int n = static_cast<int>(pts.size());
    const int k = std::min(3, n - 1);
    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<double, int>> order;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dx = pts[i].first - pts[j].first;
            const double dy = pts[i].second - pts[j].second;
            order.push_back({dx * dx + dy * dy, j});
        }
        std::sort(order.begin(), order.end());
        for (int t = 0; t < k; ++t) {
            const int j = order[static_cast<std::size_t>(t)].second;
            edges.insert({std::min(i, j), std::max(i, j)});
        }
    }
    return edges;
}

// Property letters: R rigid, B bendable, F foldable, C compressible, P plastic.
using PropertyMap = std::map<std::string, char>;

struct TraceStep {
    std::string verb;
    std::string name;
    bool ok = true;
};

// Replay of a transcript under an independent world model, judging the five
// packing rules from their definitions. Returns the set of violated rules.
//  R1: every attempted place of a plastic object needs a compressible object
//      already in the box.
//  R2: every compressible object that ends up placed must be pushed afterwards.
//  R3/R4: a bendable/foldable object must be bent/folded before a successful
//      placement.
//  R5: bend, fold and push must never be attempted on a plastic object.
inline std::set<int> violated_rules(const std::vector<TraceStep>& steps,
                                    const PropertyMap& props) {
    std::set<int> out;
    std::set<std::string> in_box, bent, folded;
    std::map<std::string, int> placed_at, pushed_at;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const TraceStep& s = steps[i];
        const char prop = props.count(s.name) ? props.at(s.name) : '?';
        if (s.verb == "place" && prop == 'P') {
            bool admitted = false;
            for (const auto& member : in_box)
                if (props.at(member) == 'C') admitted = true;
            if (!admitted) out.insert(1);
        }
        if ((s.verb == "bend" || s.verb == "fold" || s.verb == "push") && prop == 'P')
            out.insert(5);
        if (s.ok) {
            if (s.verb == "bend") bent.insert(s.name);
            if (s.verb == "fold") folded.insert(s.name);
            if (s.verb == "push") pushed_at[s.name] = static_cast<int>(i);
            if (s.verb == "place") {
                in_box.insert(s.name);
                placed_at[s.name] = static_cast<int>(i);
                if (prop == 'B' && !bent.count(s.name)) out.insert(3);
                if (prop == 'F' && !folded.count(s.name)) out.insert(4);
            }
        }
    }
    for (const auto& [name, at] : placed_at) {
        if (props.at(name) == 'C' && (!pushed_at.count(name) || pushed_at[name] < at))
            out.insert(2);
    }
    return out;
}

// Exhaustive reachability for small instances: breadth-first search over the
// full state space under the packing semantics. Objects are bit positions in
// the order given; the goal is everything in the box.
inline bool goal_reachable(const std::vector<char>& props) {
    const int n = static_cast<int>(props.size());
    if (n > 10) return false;  // keep the search honest and bounded
    const unsigned full = (1u << n) - 1u;

    struct State {
        unsigned in_box = 0, bent = 0, folded = 0, pushed = 0;
        int holding = -1;
    };
    auto encode = [&](const State& s) {
        return ((static_cast<unsigned long long>(s.holding + 1)) << (4 * 10)) |
               (static_cast<unsigned long long>(s.in_box) << (3 * 10)) |
               (static_cast<unsigned long long>(s.bent) << (2 * 10)) |
               (static_cast<unsigned long long>(s.folded) << 10) | s.pushed;
    };

    std::queue<State> frontier;
    std::set<unsigned long long> seen;
    frontier.push({});
    seen.insert(encode(State{}));
    while (!frontier.empty()) {
        const State s = frontier.front();
        frontier.pop();
        if (s.in_box == full) return true;
        for (int i = 0; i < n; ++i) {
            const unsigned bit = 1u << i;
            std::vector<State> next;
            if (s.holding < 0 && !(s.in_box & bit)) {
                State t = s;
                t.holding = i;
                next.push_back(t);  // pick
                if (props[static_cast<std::size_t>(i)] == 'B') {
                    State b = s;
                    b.bent |= bit;
                    next.push_back(b);  // bend
                }
                if (props[static_cast<std::size_t>(i)] == 'F') {
                    State f = s;
                    f.folded |= bit;
                    next.push_back(f);  // fold
                }
            }
            if (s.holding == i) {
                bool allowed = true;
                if (props[static_cast<std::size_t>(i)] == 'P') {
                    allowed = false;
                    for (int j = 0; j < n; ++j)
                        if ((s.in_box & (1u << j)) && props[static_cast<std::size_t>(j)] == 'C')
                            allowed = true;
                }
                if (allowed) {
                    State t = s;
                    t.in_box |= bit;
                    t.holding = -1;
                    next.push_back(t);  // place
                }
            }
            if (s.holding < 0 && (s.in_box & bit) &&
                props[static_cast<std::size_t>(i)] == 'C') {
                State t = s;
                t.pushed |= bit;
                next.push_back(t);  // push
            }
            for (const State& t : next) {
                if (seen.insert(encode(t)).second) frontier.push(t);
            }
        }
    }
    return false;
}

}  // namespace oracles
