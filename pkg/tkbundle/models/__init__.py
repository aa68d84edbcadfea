"""
Data models for jets, tangents, trivialized vectors and suite reports
"""
