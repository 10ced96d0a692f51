"""应用服务。"""
