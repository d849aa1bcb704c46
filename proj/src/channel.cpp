#include "mecsim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mecsim/errors.hpp"

namespace mecsim
{

namespace
{

SinrSample
make_sample (double signal, double interference, double noise)
{
  const double denom = interference + noise;
  if (!(denom > 0))
    throw NumericalError ("uplink SINR is unbounded: no interference and zero noise");
  return {signal, interference, noise, signal / denom};
}

void
check_shapes (const DeploymentRealization &deployment, const AssociationOutcome &association,
              const FadingRealization &fading)
{
  if (association.serving.size () != deployment.ues.size ())
    throw std::invalid_argument ("uplink_sinr: association does not match the deployment");
  if (fading.ue_count () != deployment.ues.size ()
      || fading.enb_count () != deployment.enb_count ())
    throw std::invalid_argument ("uplink_sinr: fading does not cover every UE-eNB pair");
}

} // namespace

void
ChannelParams::validate () const
{
  if (!(std::isfinite (pathloss_exponent) && pathloss_exponent > 2))
    throw std::invalid_argument ("channel.pathloss_exponent must be > 2");
  if (!std::isfinite (ue_tx_power_dbm))
    throw std::invalid_argument ("channel.ue_tx_power_dbm must be finite");
  if (std::isnan (noise_power_dbm) || (noise_power_dbm > 0 && std::isinf (noise_power_dbm)))
    throw std::invalid_argument ("channel.noise_power_dbm must be finite or -inf");
}

namespace
{

// d^-alpha from d^2; alpha = 4 skips pow.
double
pathloss_from_sq (double distance_sq, double alpha)
{
  if (alpha == 4.0)
    return 1.0 / (distance_sq * distance_sq);
  return std::pow (distance_sq, -0.5 * alpha);
}

} // namespace

double
received_power (double tx_power_w, double gain, double distance_km, double alpha)
{
  if (!(distance_km > 0))
    throw std::invalid_argument ("received_power: distance must be > 0");
  return tx_power_w * gain * pathloss_from_sq (distance_km * distance_km, alpha);
}

FadingRealization::FadingRealization (std::size_t ue_count, std::size_t enb_count,
                                      std::vector<double> gains)
    : ue_count_ (ue_count), enb_count_ (enb_count), gains_ (std::move (gains))
{
  if (gains_.size () != ue_count_ * enb_count_)
    throw std::invalid_argument ("FadingRealization: gain matrix has the wrong size");
}

FadingRealization
FadingRealization::sample (std::size_t ue_count, std::size_t enb_count, Rng &rng)
{
  std::exponential_distribution<double> exp1 (1.0);
  std::vector<double> gains (ue_count * enb_count);
  for (double &g : gains)
    g = exp1 (rng);
  return FadingRealization (ue_count, enb_count, std::move (gains));
}

std::vector<std::size_t>
select_transmitters (const AssociationOutcome &association, InterferenceModel model, Rng &rng)
{
  const std::size_t n = association.serving_flat.size ();
  std::vector<std::size_t> out;
  if (model == InterferenceModel::AllOutOfCell)
    {
      out.resize (n);
      std::iota (out.begin (), out.end (), std::size_t{0});
      return out;
    }

  std::vector<std::vector<std::size_t>> members (association.load.size ());
  for (std::size_t k = 0; k < n; ++k)
    members[association.serving_flat[k]].push_back (k);
  for (const auto &cell : members)
    {
      if (cell.empty ())
        continue;
      std::uniform_int_distribution<std::size_t> pick (0, cell.size () - 1);
      out.push_back (cell[pick (rng)]);
    }
  std::sort (out.begin (), out.end ());
  return out;
}

SinrSample
uplink_sinr (std::size_t ue, EnbRef serving, const DeploymentRealization &deployment,
             const AssociationOutcome &association, const FadingRealization &fading,
             const ChannelParams &params, std::span<const std::size_t> transmitters)
{
  check_shapes (deployment, association, fading);
  if (ue >= deployment.ues.size ())
    throw std::out_of_range ("uplink_sinr: UE index out of range");
  if (association.serving[ue] != serving)
    throw std::invalid_argument ("uplink_sinr: UE is not associated to the given eNB");

  const double side = deployment.window_side_km;
  const double alpha = params.pathloss_exponent;
  const double tx_w = dbm_to_watts (params.ue_tx_power_dbm);
  const std::size_t flat = deployment.flat_id (serving);
  const Point2 enb = deployment.enb_position (serving);

  const double signal = received_power (
      tx_w, fading.gain (ue, flat), toroidal_distance (deployment.ues[ue], enb, side), alpha);
  double interference = 0.0;
  for (std::size_t z : transmitters)
    {
      if (association.serving_flat[z] == flat)
        continue;
      interference += received_power (tx_w, fading.gain (z, flat),
                                      toroidal_distance (deployment.ues[z], enb, side), alpha);
    }
  return make_sample (signal, interference, dbm_to_watts (params.noise_power_dbm));
}

ReceivedPowerTable
ReceivedPowerTable::build (const DeploymentRealization &deployment,
                           const FadingRealization &fading, const ChannelParams &params)
{
  if (fading.ue_count () != deployment.ues.size ()
      || fading.enb_count () != deployment.enb_count ())
    throw std::invalid_argument ("ReceivedPowerTable: fading does not cover every UE-eNB pair");
  const double side = deployment.window_side_km;
  const double alpha = params.pathloss_exponent;
  const double tx_w = dbm_to_watts (params.ue_tx_power_dbm);

  ReceivedPowerTable table;
  table.ue_count_ = deployment.ues.size ();
  table.enb_count_ = deployment.enb_count ();
  table.power_w_.resize (table.ue_count_ * table.enb_count_);
  std::size_t e = 0;
  for (const auto &tier : deployment.enbs)
    for (const auto &enb : tier)
      {
        for (std::size_t k = 0; k < table.ue_count_; ++k)
          table.power_w_[k * table.enb_count_ + e] = received_power (
              tx_w, fading.gain (k, e), toroidal_distance (deployment.ues[k], enb, side), alpha);
        ++e;
      }
  return table;
}

std::vector<SinrSample>
uplink_sinr_all (const AssociationOutcome &association, const ReceivedPowerTable &table,
                 double noise_w, std::span<const std::size_t> transmitters)
{
  if (association.serving_flat.size () != table.ue_count ()
      || association.load.size () != table.enb_count ())
    throw std::invalid_argument ("uplink_sinr_all: association does not match the power table");
  const std::size_t enb_count = table.enb_count ();

  // Interference is only needed at eNBs that serve somebody.
  std::vector<double> interference (enb_count, 0.0);
  for (std::size_t e = 0; e < enb_count; ++e)
    {
      if (association.load[e] == 0)
        continue;
      double sum = 0.0;
      for (std::size_t z : transmitters)
        if (association.serving_flat[z] != e)
          sum += table.at (z, e);
      interference[e] = sum;
    }

  std::vector<SinrSample> out;
  out.reserve (table.ue_count ());
  for (std::size_t k = 0; k < table.ue_count (); ++k)
    {
      const std::size_t e = association.serving_flat[k];
      out.push_back (make_sample (table.at (k, e), interference[e], noise_w));
    }
  return out;
}

std::vector<SinrSample>
uplink_sinr_all (const DeploymentRealization &deployment, const AssociationOutcome &association,
                 const FadingRealization &fading, const ChannelParams &params,
                 std::span<const std::size_t> transmitters)
{
  check_shapes (deployment, association, fading);
  const auto table = ReceivedPowerTable::build (deployment, fading, params);
  return uplink_sinr_all (association, table, dbm_to_watts (params.noise_power_dbm), transmitters);
}

} // namespace mecsim
