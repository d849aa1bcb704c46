#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mecsim/association.hpp"
#include "mecsim/deployment.hpp"
#include "mecsim/random.hpp"
#include "mecsim/units.hpp"

namespace mecsim
{

struct ChannelParams
{
  double pathloss_exponent = 4.0;
  double ue_tx_power_dbm = 23.0;
  double noise_power_dbm = -90.0;

  void validate () const;

  friend bool operator== (const ChannelParams &, const ChannelParams &) = default;
};

// Which out-of-cell UEs transmit on the serving eNB's resources.
enum class InterferenceModel
{
  AllOutOfCell, // every UE served elsewhere interferes at full power
  OnePerCell,   // one randomly scheduled UE per other cell
};

// Unbounded power-law pathloss, distance in km. Throws on distance <= 0.
double received_power (double tx_power_w, double gain, double distance_km, double alpha);

// |h|^2 for every (UE, eNB) pair, i.i.d. Exp(1).
class FadingRealization
{
public:
  FadingRealization () = default;
  FadingRealization (std::size_t ue_count, std::size_t enb_count, std::vector<double> gains);

  static FadingRealization sample (std::size_t ue_count, std::size_t enb_count, Rng &rng);

  std::size_t ue_count () const { return ue_count_; }
  std::size_t enb_count () const { return enb_count_; }
  double gain (std::size_t ue, std::size_t enb_flat) const { return gains_[ue * enb_count_ + enb_flat]; }

private:
  std::size_t ue_count_ = 0;
  std::size_t enb_count_ = 0;
  std::vector<double> gains_;
};

struct SinrSample
{
  double signal_w = 0.0;
  double interference_w = 0.0;
  double noise_w = 0.0;
  double sinr = 0.0;
};

// UEs that transmit during the slot, in increasing index order.
std::vector<std::size_t> select_transmitters (const AssociationOutcome &association,
                                              InterferenceModel model, Rng &rng);

// SINR of `ue` at `serving`. Interference sums every transmitter not served
// by `serving`. Throws NumericalError when interference and noise are both 0.
SinrSample uplink_sinr (std::size_t ue, EnbRef serving, const DeploymentRealization &deployment,
                        const AssociationOutcome &association, const FadingRealization &fading,
                        const ChannelParams &params, std::span<const std::size_t> transmitters);

// P_UE |h|^2 d^-alpha for every (UE, eNB) pair of one realization; shared by
// every association rule evaluated on that realization.
class ReceivedPowerTable
{
public:
  static ReceivedPowerTable build (const DeploymentRealization &deployment,
                                   const FadingRealization &fading, const ChannelParams &params);

  std::size_t ue_count () const { return ue_count_; }
  std::size_t enb_count () const { return enb_count_; }
  double at (std::size_t ue, std::size_t enb_flat) const { return power_w_[ue * enb_count_ + enb_flat]; }

private:
  std::size_t ue_count_ = 0;
  std::size_t enb_count_ = 0;
  std::vector<double> power_w_;
};

std::vector<SinrSample> uplink_sinr_all (const AssociationOutcome &association,
                                         const ReceivedPowerTable &table, double noise_w,
                                         std::span<const std::size_t> transmitters);

// Same as uplink_sinr for every UE, accumulating interference per eNB once.
std::vector<SinrSample> uplink_sinr_all (const DeploymentRealization &deployment,
                                         const AssociationOutcome &association,
                                         const FadingRealization &fading,
                                         const ChannelParams &params,
                                         std::span<const std::size_t> transmitters);

} // namespace mecsim
