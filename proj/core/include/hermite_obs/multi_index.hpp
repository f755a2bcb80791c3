#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

namespace hermite_obs {

struct MultiIndex {
  std::vector<int> entries;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> e);
  int dim() const { return static_cast<int>(entries.size()); }
  int order() const;
  int operator[](int j) const { return entries[static_cast<std::size_t>(j)]; }
  bool operator==(const MultiIndex& o) const { return entries == o.entries; }
  bool operator!=(const MultiIndex& o) const { return entries != o.entries; }
};

// Graded order: total degree ascending; inside a degree, lexicographically
// descending, so (1,0) precedes (0,1).
std::vector<MultiIndex> enumerate_multiindices(int n, int N);

std::size_t binomial(int a, int b);

// Enumerated index set of E_N with constant-time position lookup.
class IndexSet {
 public:
  IndexSet(int n, int N);

  int n() const { return n_; }
  int cutoff() const { return N_; }
  std::size_t size() const { return list_.size(); }
  const MultiIndex& operator[](std::size_t i) const { return list_[i]; }
  const std::vector<MultiIndex>& list() const { return list_; }
  // Position of alpha, or nullopt when |alpha| > N or any entry is negative.
  std::optional<std::size_t> position(const std::vector<int>& alpha) const;
  std::optional<std::size_t> position(const MultiIndex& alpha) const { return position(alpha.entries); }
  // Number of indices with |alpha| <= k (a prefix of the ordering).
  std::size_t prefix_size(int k) const;
  int order_of(std::size_t i) const { return orders_[i]; }

 private:
  std::uint64_t key(const std::vector<int>& alpha) const;

  int n_;
  int N_;
  std::vector<MultiIndex> list_;
  std::vector<int> orders_;
  std::unordered_map<std::uint64_t, std::size_t> lookup_;
};

// Shared, cached index sets; safe to call from several threads.
std::shared_ptr<const IndexSet> index_set(int n, int N);

}  // namespace hermite_obs
