"""
Streaming algorithm services for vcstream
One module per regime, plus the shared sketch and kernel layers
"""
