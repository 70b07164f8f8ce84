package shop;

public class Gadget {
}
