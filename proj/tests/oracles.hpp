#pragma once

// Brute-force references shared by the unit and acceptance tests.

#include <algorithm>
#include <deque>
#include <functional>
#include <vector>

#include "tvqc/decoder.hpp"

namespace oracle {

using namespace tvqc;

// Shortest qubit-path lengths between checks of one kind, found by BFS on the
// check graph built from the stabilizer supports. Node `m` is the boundary.
inline std::vector<std::vector<int>> check_graph_distances(const PlanarCode& code, DefectKind kind) {
    const auto& support = kind == DefectKind::XError ? code.z_check_support() : code.x_check_support();
    const int m = static_cast<int>(support.size());
    std::vector<std::vector<int>> touching(code.num_qubits());
    for (int c = 0; c < m; ++c)
        for (int q : support[c]) touching[q].push_back(c);
    std::vector<std::vector<int>> adj(m + 1);
    for (const auto& t : touching) {
        if (t.size() == 2) {
            adj[t[0]].push_back(t[1]);
            adj[t[1]].push_back(t[0]);
        } else if (t.size() == 1) {
            adj[t[0]].push_back(m);
            adj[m].push_back(t[0]);
        }
    }
    std::vector<std::vector<int>> dist(m + 1, std::vector<int>(m + 1, -1));
    for (int s = 0; s <= m; ++s) {
        std::deque<int> q{s};
        dist[s][s] = 0;
        while (!q.empty()) {
            const int u = q.front();
            q.pop_front();
            if (u == m && s != m) continue;  // paths may end at, not pass through, the boundary
            for (int v : adj[u])
                if (dist[s][v] < 0) {
                    dist[s][v] = dist[s][u] + 1;
                    q.push_back(v);
                }
        }
    }
    return dist;
}

// Exhaustive minimum over pairings where any defect may instead go to the boundary.
inline int pairing_oracle(const std::vector<int>& defects, const std::vector<std::vector<int>>& dist, int boundary) {
    std::vector<bool> used(defects.size(), false);
    std::function<int(std::size_t)> rec = [&](std::size_t i) -> int {
        while (i < defects.size() && used[i]) ++i;
        if (i == defects.size()) return 0;
        used[i] = true;
        int best = dist[defects[i]][boundary] + rec(i + 1);
        for (std::size_t j = i + 1; j < defects.size(); ++j) {
            if (used[j]) continue;
            used[j] = true;
            best = std::min(best, dist[defects[i]][defects[j]] + rec(i + 1));
            used[j] = false;
        }
        used[i] = false;
        return best;
    };
    return rec(0);
}

} // namespace oracle
