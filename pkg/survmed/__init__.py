"""
**survmed** summarizes clinical outcomes that are truncated by death. It ranks
death below every survivor score, computes survival-incorporated quantiles of
the resulting composite outcomes, and contrasts them with the median in the
survivors and the median in the always-survivors.
"""
