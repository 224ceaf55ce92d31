#include "hybridnet/matching.h"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "hybridnet/error.h"

// Port of Joris van Rantwijk's reference implementation of the
// primal-dual blossom algorithm. Vertices are 0..n-1, blossoms n..2n-1.
// Edge k has endpoints 2k (tail) and 2k+1 (head); p ^ 1 is the other end.

namespace hybridnet {
namespace {

class Blossom {
 public:
  Blossom(int n, const std::vector<WeightedEdge>& edges)
      : n_(n), edges_(edges), endpoint_(2 * edges.size()), neighbend_(n) {
    double max_weight = 0;
    bool integral = true;
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      const WeightedEdge& e = edges_[k];
      if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n || e.u == e.v) {
        throw Error(ErrorCode::kInvalidArgument, "bad matching edge");
      }
      endpoint_[2 * k] = e.u;
      endpoint_[2 * k + 1] = e.v;
      neighbend_[e.u].push_back(static_cast<int>(2 * k + 1));
      neighbend_[e.v].push_back(static_cast<int>(2 * k));
      max_weight = std::max(max_weight, e.weight);
      if (e.weight != std::floor(e.weight)) integral = false;
    }
    epsilon_ = integral ? 0.0 : 1e-10 * std::max(1.0, max_weight);
    mate_.assign(n, -1);
    label_.assign(2 * n, 0);
    labelend_.assign(2 * n, -1);
    inblossom_.resize(n);
    for (int v = 0; v < n; ++v) inblossom_[v] = v;
    blossomparent_.assign(2 * n, -1);
    blossomchilds_.assign(2 * n, {});
    blossombase_.assign(2 * n, -1);
    for (int v = 0; v < n; ++v) blossombase_[v] = v;
    blossomendps_.assign(2 * n, {});
    bestedge_.assign(2 * n, -1);
    blossombestedges_.assign(2 * n, {});
    has_bestedges_.assign(2 * n, false);
    for (int b = 2 * n - 1; b >= n; --b) unusedblossoms_.push_back(b);
    dualvar_.assign(2 * n, 0.0);
    for (int v = 0; v < n; ++v) dualvar_[v] = max_weight;
    allowedge_.assign(edges_.size(), false);
  }

  std::vector<int> solve();

 private:
  double slack(int k) const {
    return dualvar_[edges_[k].u] + dualvar_[edges_[k].v] - 2 * edges_[k].weight;
  }

  void leaves(int b, std::vector<int>& out) const {
    if (b < n_) {
      out.push_back(b);
      return;
    }
    for (int t : blossomchilds_[b]) leaves(t, out);
  }
  std::vector<int> leaves(int b) const {
    std::vector<int> out;
    leaves(b, out);
    return out;
  }

  void assign_label(int w, int t, int p);
  int scan_blossom(int v, int w);
  void add_blossom(int base, int k);
  void expand_blossom(int b, bool endstage);
  void augment_blossom(int b, int v);
  void augment_matching(int k);

  int n_;
  const std::vector<WeightedEdge>& edges_;
  double epsilon_ = 0;
  std::vector<int> endpoint_;
  std::vector<std::vector<int>> neighbend_;
  std::vector<int> mate_;
  std::vector<int> label_;
  std::vector<int> labelend_;
  std::vector<int> inblossom_;
  std::vector<int> blossomparent_;
  std::vector<std::vector<int>> blossomchilds_;
  std::vector<int> blossombase_;
  std::vector<std::vector<int>> blossomendps_;
  std::vector<int> bestedge_;
  std::vector<std::vector<int>> blossombestedges_;
  std::vector<bool> has_bestedges_;
  std::vector<int> unusedblossoms_;
  std::vector<double> dualvar_;
  std::vector<bool> allowedge_;
  std::vector<int> queue_;
};

void Blossom::assign_label(int w, int t, int p) {
  const int b = inblossom_[w];
  label_[w] = label_[b] = t;
  labelend_[w] = labelend_[b] = p;
  bestedge_[w] = bestedge_[b] = -1;
  if (t == 1) {
    leaves(b, queue_);
  } else if (t == 2) {
    const int base = blossombase_[b];
    assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
  }
}

int Blossom::scan_blossom(int v, int w) {
  std::vector<int> path;
  int base = -1;
  while (v != -1 || w != -1) {
    int b = inblossom_[v];
    if (label_[b] & 4) {
      base = blossombase_[b];
      break;
    }
    path.push_back(b);
    label_[b] = 5;
    if (labelend_[b] == -1) {
      v = -1;
    } else {
      v = endpoint_[labelend_[b]];
      b = inblossom_[v];
      v = endpoint_[labelend_[b]];
    }
    if (w != -1) std::swap(v, w);
  }
  for (int b : path) label_[b] = 1;
  return base;
}

void Blossom::add_blossom(int base, int k) {
  int v = edges_[k].u;
  int w = edges_[k].v;
  const int bb = inblossom_[base];
  int bv = inblossom_[v];
  int bw = inblossom_[w];
  const int b = unusedblossoms_.back();
  unusedblossoms_.pop_back();
  blossombase_[b] = base;
  blossomparent_[b] = -1;
  blossomparent_[bb] = b;
  std::vector<int>& path = blossomchilds_[b];
  std::vector<int>& endps = blossomendps_[b];
  path.clear();
  endps.clear();
  while (bv != bb) {
    blossomparent_[bv] = b;
    path.push_back(bv);
    endps.push_back(labelend_[bv]);
    v = endpoint_[labelend_[bv]];
    bv = inblossom_[v];
  }
  path.push_back(bb);
  std::reverse(path.begin(), path.end());
  std::reverse(endps.begin(), endps.end());
  endps.push_back(2 * k);
  while (bw != bb) {
    blossomparent_[bw] = b;
    path.push_back(bw);
    endps.push_back(labelend_[bw] ^ 1);
    w = endpoint_[labelend_[bw]];
    bw = inblossom_[w];
  }
  label_[b] = 1;
  labelend_[b] = labelend_[bb];
  dualvar_[b] = 0;
  for (int leaf : leaves(b)) {
    if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
    inblossom_[leaf] = b;
  }

  std::vector<int> bestedgeto(2 * n_, -1);
  for (int child : path) {
    std::vector<std::vector<int>> nblists;
    if (!has_bestedges_[child]) {
      for (int leaf : leaves(child)) {
        std::vector<int> list;
        for (int p : neighbend_[leaf]) list.push_back(p / 2);
        nblists.push_back(std::move(list));
      }
    } else {
      nblists.push_back(blossombestedges_[child]);
    }
    for (const auto& nblist : nblists) {
      for (int e : nblist) {
        int i = edges_[e].u;
        int j = edges_[e].v;
        if (inblossom_[j] == b) std::swap(i, j);
        const int bj = inblossom_[j];
        if (bj != b && label_[bj] == 1 &&
            (bestedgeto[bj] == -1 || slack(e) < slack(bestedgeto[bj]))) {
          bestedgeto[bj] = e;
        }
      }
    }
    blossombestedges_[child].clear();
    has_bestedges_[child] = false;
    bestedge_[child] = -1;
  }
  blossombestedges_[b].clear();
  for (int e : bestedgeto) {
    if (e != -1) blossombestedges_[b].push_back(e);
  }
  has_bestedges_[b] = true;
  bestedge_[b] = -1;
  for (int e : blossombestedges_[b]) {
    if (bestedge_[b] == -1 || slack(e) < slack(bestedge_[b])) bestedge_[b] = e;
  }
}

void Blossom::expand_blossom(int b, bool endstage) {
  for (int s : blossomchilds_[b]) {
    blossomparent_[s] = -1;
    if (s < n_) {
      inblossom_[s] = s;
    } else if (endstage && dualvar_[s] <= epsilon_) {
      expand_blossom(s, endstage);
    } else {
      for (int leaf : leaves(s)) inblossom_[leaf] = s;
    }
  }
  if (!endstage && label_[b] == 2) {
    std::vector<int>& childs = blossomchilds_[b];
    std::vector<int>& endps = blossomendps_[b];
    const int size = static_cast<int>(childs.size());
    const int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
    int j = static_cast<int>(std::find(childs.begin(), childs.end(), entrychild) -
                             childs.begin());
    int jstep;
    int endptrick;
    if (j & 1) {
      j -= size;
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    auto at = [size](const std::vector<int>& list, int index) {
      return list[((index % size) + size) % size];
    };
    int p = labelend_[b];
    while (j != 0) {
      label_[endpoint_[p ^ 1]] = 0;
      label_[endpoint_[at(endps, j - endptrick) ^ endptrick ^ 1]] = 0;
      assign_label(endpoint_[p ^ 1], 2, p);
      allowedge_[at(endps, j - endptrick) / 2] = true;
      j += jstep;
      p = at(endps, j - endptrick) ^ endptrick;
      allowedge_[p / 2] = true;
      j += jstep;
    }
    int bv = at(childs, j);
    label_[endpoint_[p ^ 1]] = label_[bv] = 2;
    labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
    bestedge_[bv] = -1;
    j += jstep;
    while (at(childs, j) != entrychild) {
      bv = at(childs, j);
      if (label_[bv] == 1) {
        j += jstep;
        continue;
      }
      int found = -1;
      for (int leaf : leaves(bv)) {
        if (label_[leaf] != 0) {
          found = leaf;
          break;
        }
      }
      if (found != -1) {
        label_[found] = 0;
        label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
        assign_label(found, 2, labelend_[found]);
      }
      j += jstep;
    }
  }
  label_[b] = labelend_[b] = -1;
  blossomchilds_[b].clear();
  blossomendps_[b].clear();
  blossombase_[b] = -1;
  blossombestedges_[b].clear();
  has_bestedges_[b] = false;
  bestedge_[b] = -1;
  unusedblossoms_.push_back(b);
}

void Blossom::augment_blossom(int b, int v) {
  int t = v;
  while (blossomparent_[t] != b) t = blossomparent_[t];
  if (t >= n_) augment_blossom(t, v);
  std::vector<int>& childs = blossomchilds_[b];
  std::vector<int>& endps = blossomendps_[b];
  const int size = static_cast<int>(childs.size());
  const int i = static_cast<int>(std::find(childs.begin(), childs.end(), t) -
                                 childs.begin());
  int j = i;
  int jstep;
  int endptrick;
  if (i & 1) {
    j -= size;
    jstep = 1;
    endptrick = 0;
  } else {
    jstep = -1;
    endptrick = 1;
  }
  auto at = [size](const std::vector<int>& list, int index) {
    return list[((index % size) + size) % size];
  };
  while (j != 0) {
    j += jstep;
    t = at(childs, j);
    const int p = at(endps, j - endptrick) ^ endptrick;
    if (t >= n_) augment_blossom(t, endpoint_[p]);
    j += jstep;
    t = at(childs, j);
    if (t >= n_) augment_blossom(t, endpoint_[p ^ 1]);
    mate_[endpoint_[p]] = p ^ 1;
    mate_[endpoint_[p ^ 1]] = p;
  }
  std::rotate(childs.begin(), childs.begin() + i, childs.end());
  std::rotate(endps.begin(), endps.begin() + i, endps.end());
  blossombase_[b] = blossombase_[childs[0]];
}

void Blossom::augment_matching(int k) {
  const int ends[2][2] = {{edges_[k].u, 2 * k + 1}, {edges_[k].v, 2 * k}};
  for (const auto& start : ends) {
    int s = start[0];
    int p = start[1];
    while (true) {
      const int bs = inblossom_[s];
      if (bs >= n_) augment_blossom(bs, s);
      mate_[s] = p;
      if (labelend_[bs] == -1) break;
      const int t = endpoint_[labelend_[bs]];
      const int bt = inblossom_[t];
      s = endpoint_[labelend_[bt]];
      const int j = endpoint_[labelend_[bt] ^ 1];
      if (bt >= n_) augment_blossom(bt, j);
      mate_[j] = labelend_[bt];
      p = labelend_[bt] ^ 1;
    }
  }
}

std::vector<int> Blossom::solve() {
  const int nedge = static_cast<int>(edges_.size());
  for (int stage = 0; stage < n_; ++stage) {
    std::fill(label_.begin(), label_.end(), 0);
    std::fill(bestedge_.begin(), bestedge_.end(), -1);
    for (int b = n_; b < 2 * n_; ++b) {
      blossombestedges_[b].clear();
      has_bestedges_[b] = false;
    }
    std::fill(allowedge_.begin(), allowedge_.end(), false);
    queue_.clear();
    for (int v = 0; v < n_; ++v) {
      if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);
    }

    bool augmented = false;
    while (true) {
      while (!queue_.empty() && !augmented) {
        const int v = queue_.back();
        queue_.pop_back();
        for (int p : neighbend_[v]) {
          const int k = p / 2;
          const int w = endpoint_[p];
          if (inblossom_[v] == inblossom_[w]) continue;
          double kslack = 0;
          if (!allowedge_[k]) {
            kslack = slack(k);
            if (kslack <= epsilon_) allowedge_[k] = true;
          }
          if (allowedge_[k]) {
            if (label_[inblossom_[w]] == 0) {
              assign_label(w, 2, p ^ 1);
            } else if (label_[inblossom_[w]] == 1) {
              const int base = scan_blossom(v, w);
              if (base >= 0) {
                add_blossom(base, k);
              } else {
                augment_matching(k);
                augmented = true;
                break;
              }
            } else if (label_[w] == 0) {
              label_[w] = 2;
              labelend_[w] = p ^ 1;
            }
          } else if (label_[inblossom_[w]] == 1) {
            const int b = inblossom_[v];
            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
          } else if (label_[w] == 0) {
            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
          }
        }
      }
      if (augmented) break;

      // Dual adjustment. Without max-cardinality there is always a type 1
      // candidate, so delta is well defined.
      int deltatype = 1;
      double delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + n_);
      int deltaedge = -1;
      int deltablossom = -1;
      for (int v = 0; v < n_; ++v) {
        if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
          const double d = slack(bestedge_[v]);
          if (d < delta) {
            delta = d;
            deltatype = 2;
            deltaedge = bestedge_[v];
          }
        }
      }
      for (int b = 0; b < 2 * n_; ++b) {
        if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
          const double d = slack(bestedge_[b]) / 2;
          if (d < delta) {
            delta = d;
            deltatype = 3;
            deltaedge = bestedge_[b];
          }
        }
      }
      for (int b = n_; b < 2 * n_; ++b) {
        if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
            dualvar_[b] < delta) {
          delta = dualvar_[b];
          deltatype = 4;
          deltablossom = b;
        }
      }

      for (int v = 0; v < n_; ++v) {
        if (label_[inblossom_[v]] == 1) {
          dualvar_[v] -= delta;
        } else if (label_[inblossom_[v]] == 2) {
          dualvar_[v] += delta;
        }
      }
      for (int b = n_; b < 2 * n_; ++b) {
        if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
          if (label_[b] == 1) {
            dualvar_[b] += delta;
          } else if (label_[b] == 2) {
            dualvar_[b] -= delta;
          }
        }
      }

      if (deltatype == 1) {
        break;
      } else if (deltatype == 2) {
        allowedge_[deltaedge] = true;
        int i = edges_[deltaedge].u;
        if (label_[inblossom_[i]] == 0) i = edges_[deltaedge].v;
        queue_.push_back(i);
      } else if (deltatype == 3) {
        allowedge_[deltaedge] = true;
        queue_.push_back(edges_[deltaedge].u);
      } else {
        expand_blossom(deltablossom, false);
      }
    }
    if (!augmented) break;

    for (int b = n_; b < 2 * n_; ++b) {
      if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 &&
          dualvar_[b] <= epsilon_) {
        expand_blossom(b, true);
      }
    }
  }
  (void)nedge;

  std::vector<int> mates(n_, -1);
  for (int v = 0; v < n_; ++v) {
    if (mate_[v] >= 0) mates[v] = endpoint_[mate_[v]];
  }
  return mates;
}

}  // namespace

std::vector<int> blossom_matching(int num_vertices,
                                  const std::vector<WeightedEdge>& edges) {
  if (num_vertices <= 0 || edges.empty()) {
    return std::vector<int>(std::max(num_vertices, 0), -1);
  }
  return Blossom(num_vertices, edges).solve();
}

}  // namespace hybridnet
